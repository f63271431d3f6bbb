#pragma once

/**
 * @file kernels.hpp
 * @brief The canonical system of intertwining kernels K_{M°,L°}.
 *
 * On a transverse pair (L + M = V) every v splits uniquely as v = m + l, and
 *   K_{M°,L°}(v, z) = A * psi(z - omega(m, l)/2),
 *   A = (G/p)^n * sigma((-1)^{n(n-1)/2} * wedge(o_L, o_M)).
 * Other pairs are reached by factoring through the lexicographically least
 * Lagrangian N transverse to both: K_{M,L} = K_{M,N} * K_{N,L}.
 */

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "concurrency.hpp"
#include "cyc_matrix.hpp"
#include "cyclotomic.hpp"
#include "heisenberg.hpp"
#include "symplectic.hpp"

namespace canonweil {

class non_transverse : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Result of an exact check; `witness` is the first point of H where it fails.
struct CheckOutcome {
  bool passed = true;
  std::optional<HElement> witness;

  explicit operator bool() const { return passed; }
};

inline CheckOutcome compare_functions(const EquivariantFunction& a, const EquivariantFunction& b) {
  auto diff = first_difference(a, b);
  return {!diff.has_value(), std::move(diff)};
}

/// Vector indices of all points of the Lagrangian, in coefficient order.
inline std::vector<int> lagrangian_points(const SymplecticSpace& space, const Lagrangian& lag) {
  const int p = space.prime();
  const int n = lag.n();
  const long long count = ipow(p, n);
  std::vector<int> out;
  out.reserve(static_cast<size_t>(count));
  for (long long code = 0; code < count; ++code) {
    FpVector v(static_cast<size_t>(space.dim()), 0);
    long long rest = code;
    for (int i = 0; i < n; ++i) {
      const int a = static_cast<int>(rest % p);
      rest /= p;
      for (int c = 0; c < space.dim(); ++c) v[c] = mod(v[c] + static_cast<long long>(a) * lag.basis().at(i, c), p);
    }
    out.push_back(space.index(v));
  }
  return out;
}

inline CycNum normalization_A(const SymplecticSpace& space, const OrientedLagrangian& m, const OrientedLagrangian& l) {
  const int p = space.prime();
  const int n = space.n();
  const int w = volume_pairing(space, l, m).value;
  if (w == 0) throw non_transverse("normalization_A: the Lagrangians are not transverse");
  const CycNum ratio = gauss_sum(p).scaled(Rat(1, static_cast<unsigned long>(p)));
  CycNum a = CycNum::one(p);
  for (int i = 0; i < n; ++i) a *= ratio;
  const long long sign = (n * (n - 1) / 2) % 2 == 0 ? 1 : -1;
  return a.scaled(Rat(sigma(p, sign * w)));
}

inline EquivariantFunction kernel_transverse(const SpacePtr& space, const OrientedLagrangian& m, const OrientedLagrangian& l) {
  const auto& sp = *space;
  const int p = sp.prime();
  const CycNum a = normalization_A(sp, m, l);
  std::vector<CycNum> slice(static_cast<size_t>(sp.vector_count()), CycNum(p));
  const auto m_points = lagrangian_points(sp, m.lagrangian);
  const auto l_points = lagrangian_points(sp, l.lagrangian);
  for (int mi : m_points)
    for (int li : l_points) slice[sp.add_idx(mi, li)] = a.times_zeta(-static_cast<long long>(h_cocycle(sp, mi, li)));
  return EquivariantFunction::from_slice(space, m.lagrangian, l.lagrangian, CentralCharacter::psi, slice);
}

/// The unit for convolution on the model of L: psi(z) on Z.L, zero elsewhere.
inline EquivariantFunction identity_kernel(const SpacePtr& space, const OrientedLagrangian& l) {
  const int p = space->prime();
  std::vector<CycNum> slice(static_cast<size_t>(space->vector_count()), CycNum(p));
  for (int v : lagrangian_points(*space, l.lagrangian)) slice[v] = CycNum::one(p);
  return EquivariantFunction::from_slice(space, l.lagrangian, l.lagrangian, CentralCharacter::psi, slice);
}

/// Lazily materialized kernels for every ordered pair of oriented Lagrangians.
class KernelSystem {
 public:
  explicit KernelSystem(SpacePtr space) : space_(std::move(space)), lagrangians_(enumerate_lagrangians(*space_)) {}

  const SpacePtr& space() const { return space_; }
  const std::vector<Lagrangian>& lagrangians() const { return lagrangians_; }

  /// Lexicographically least Lagrangian transverse to both arguments.
  const Lagrangian& auxiliary(const Lagrangian& m, const Lagrangian& l) const {
    for (const auto& n : lagrangians_)
      if (transverse(*space_, n, m) && transverse(*space_, n, l)) return n;
    throw non_transverse("KernelSystem: no Lagrangian is transverse to both arguments");
  }

  /// K_{M°,N°} * K_{N°,L°} for an N transverse to both.
  EquivariantFunction kernel_via(const OrientedLagrangian& m, const OrientedLagrangian& l, const OrientedLagrangian& n) const {
    return convolve(kernel_transverse(space_, m, n), kernel_transverse(space_, n, l));
  }

  const EquivariantFunction& kernel(const OrientedLagrangian& m, const OrientedLagrangian& l) {
    return memo_.get_or_compute({m, l}, [&] {
      if (transverse(*space_, m.lagrangian, l.lagrangian)) return kernel_transverse(space_, m, l);
      return kernel_via(m, l, {auxiliary(m.lagrangian, l.lagrangian), 1});
    });
  }

  size_t materialized() const { return memo_.size(); }

 private:
  SpacePtr space_;
  std::vector<Lagrangian> lagrangians_;
  ConcurrentMemo<std::pair<OrientedLagrangian, OrientedLagrangian>, EquivariantFunction> memo_;
};

/**
 * Matrix of f -> K * f from the model of `source` (K's right Lagrangian) to
 * the model of `target` (K's left Lagrangian), in transversal delta bases:
 *   (K * f)(u_s, 0) = sum_r K(r, 0) f((-r, 0)(u_s, 0)).
 */
inline WeilOperator operator_of_kernel(const EquivariantFunction& k, const OrientedLagrangian& target, const OrientedLagrangian& source) {
  if (!k.left() || !k.right() || *k.left() != target.lagrangian || *k.right() != source.lagrangian)
    throw equivariance_mismatch("operator_of_kernel: kernel is not bi-equivariant for the given models");
  const auto& sp = *k.space();
  const int p = sp.prime();
  const Transversal out(sp, target.lagrangian);
  const Transversal in(sp, source.lagrangian);
  CycMatrix m(p, out.size(), in.size());
  for (int s = 0; s < out.size(); ++s) {
    const int u = out.rep_indices()[s];
    for (int r : in.rep_indices()) {
      const CycNum& kr = k.at_vec(r);
      if (kr.is_zero()) continue;
      // (-r,0)(u,0) = (u - r, -omega(r, u)/2)
      const auto& loc = in.locate(sp.sub_idx(u, r));
      m.at(s, loc.rep) += kr.times_zeta(loc.shift - static_cast<long long>(h_cocycle(sp, r, u)));
    }
  }
  return {source, target, std::move(m)};
}

/// F[f](h) = sum over m in M of f((m,0) h), from the model of L to the model of M.
inline WeilOperator averaging_F(const SymplecticSpace& space, const OrientedLagrangian& m, const OrientedLagrangian& l) {
  if (!transverse(space, m.lagrangian, l.lagrangian)) throw non_transverse("averaging_F: the Lagrangians are not transverse");
  const int p = space.prime();
  const Transversal out(space, m.lagrangian);
  const Transversal in(space, l.lagrangian);
  const auto m_points = lagrangian_points(space, m.lagrangian);
  CycMatrix f(p, out.size(), in.size());
  for (int s = 0; s < out.size(); ++s) {
    const int u = out.rep_indices()[s];
    for (int mi : m_points) {
      // (m,0)(u,0) = (m + u, omega(m, u)/2)
      const auto& loc = in.locate(space.add_idx(mi, u));
      f.at(s, loc.rep) += psi(p, static_cast<long long>(h_cocycle(space, mi, u)) + loc.shift);
    }
  }
  return {l, m, std::move(f)};
}

/// T pi_L(h) = pi_M(h) T for every h in H; the witness is the first failing h.
inline CheckOutcome intertwining_check(const SymplecticSpace& space, const WeilOperator& t) {
  const Transversal in(space, t.source.lagrangian);
  const Transversal out(space, t.target.lagrangian);
  for (int i = 0; i < space.heisenberg_order(); ++i) {
    const HElement h = h_element(space, i);
    if (t.matrix * pi_matrix(space, in, h) != pi_matrix(space, out, h) * t.matrix) return {false, h};
  }
  return {};
}

inline CheckOutcome multiplicativity_check(KernelSystem& sys, const OrientedLagrangian& n, const OrientedLagrangian& m,
                                           const OrientedLagrangian& l) {
  return compare_functions(convolve(sys.kernel(n, m), sys.kernel(m, l)), sys.kernel(n, l));
}

/// (K43 * K32) * K21 against K43 * (K32 * K21), both evaluated in full.
inline CheckOutcome associativity_c1_check(KernelSystem& sys, const OrientedLagrangian& l4, const OrientedLagrangian& l3,
                                           const OrientedLagrangian& l2, const OrientedLagrangian& l1) {
  const auto& k43 = sys.kernel(l4, l3);
  const auto& k32 = sys.kernel(l3, l2);
  const auto& k21 = sys.kernel(l2, l1);
  return compare_functions(convolve(convolve(k43, k32), k21), convolve(k43, convolve(k32, k21)));
}

/// K_{gM°, gL°}(g v, z) = K_{M°, L°}(v, z) for all (v, z).
inline CheckOutcome sp_invariance_check(KernelSystem& sys, const SpElement& g, const OrientedLagrangian& m, const OrientedLagrangian& l) {
  const auto& sp = *sys.space();
  const auto& moved = sys.kernel(act_on_olag(sp, g, m), act_on_olag(sp, g, l));
  const auto& base = sys.kernel(m, l);
  for (int i = 0; i < sp.heisenberg_order(); ++i) {
    const HElement h = h_element(sp, i);
    if (moved.at(HElement{g.apply(h.v), h.z}) != base.at(i)) return {false, h};
  }
  return {};
}

/// If the matrix is a scalar multiple of the identity, that scalar.
inline std::optional<CycNum> scalar_value(const CycMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) return std::nullopt;
  const CycNum& c = m.at(0, 0);
  for (int r = 0; r < m.rows(); ++r)
    for (int col = 0; col < m.cols(); ++col)
      if (m.at(r, col) != (r == col ? c : CycNum(m.prime()))) return std::nullopt;
  return c;
}

/// The operator T_{(L, c o), (L, o)}, which acts on a single model.
inline WeilOperator reorientation_operator(KernelSystem& sys, const OrientedLagrangian& l, int c) {
  const OrientedLagrangian target{l.lagrangian, mod(static_cast<long long>(l.orient) * c, sys.space()->prime())};
  return operator_of_kernel(sys.kernel(target, l), target, l);
}

}  // namespace canonweil
