#pragma once

/**
 * @file heisenberg.hpp
 * @brief The Heisenberg group H = V x F_p and its Lagrangian models.
 *
 * Group law: (v, z)(v', z') = (v + v', z + z' + omega(v, v') / 2).
 *
 * An element (v, z) is addressed by the index  vidx * p + z, so tables over
 * H are ordered lexicographically by (v, z).
 *
 * For a Lagrangian L the model C(L\H, psi) consists of functions with
 * f((0,z)(l,0)h) = psi(z) f(h). Such an f is determined by its values on the
 * transversal {(u, 0)}, u running over vectors supported on the non-pivot
 * coordinates of L's RREF basis. Every h = (v, w) factors uniquely as
 *   h = (0, w - omega(l, u)/2) (l, 0) (u, 0),   v = l + u,
 * where l is the pivot-coordinate combination of the basis rows.
 */

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cyc_matrix.hpp"
#include "cyclotomic.hpp"
#include "field_elimination.hpp"
#include "symplectic.hpp"

namespace canonweil {

struct HElement {
  FpVector v;
  int z = 0;

  friend bool operator==(const HElement&, const HElement&) = default;
};

inline HElement h_identity(const SymplecticSpace& space) { return {FpVector(static_cast<size_t>(space.dim()), 0), 0}; }

inline HElement h_mul(const SymplecticSpace& space, const HElement& a, const HElement& b) {
  if (static_cast<int>(a.v.size()) != space.dim() || static_cast<int>(b.v.size()) != space.dim())
    throw dimension_error("h_mul: elements belong to a different space");
  const int p = space.prime();
  FpVector v(a.v.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = (a.v[i] + b.v[i]) % p;
  const long long z = static_cast<long long>(a.z) + b.z + static_cast<long long>(half_mod(p)) * space.omega(a.v, b.v);
  return {std::move(v), mod(z, p)};
}

inline HElement h_inv(const SymplecticSpace& space, const HElement& a) {
  const int p = space.prime();
  FpVector v(a.v.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = mod(-a.v[i], p);
  return {std::move(v), mod(-a.z, p)};
}

inline int h_index(const SymplecticSpace& space, const HElement& h) { return space.index(h.v) * space.prime() + mod(h.z, space.prime()); }

inline HElement h_element(const SymplecticSpace& space, int index) {
  return {space.vec(index / space.prime()), index % space.prime()};
}

/// Central coordinate of (v1, 0)(v2, 0), i.e. omega(v1, v2)/2.
inline int h_cocycle(const SymplecticSpace& space, int v1, int v2) {
  return static_cast<int>(static_cast<long long>(half_mod(space.prime())) * space.omega_idx(v1, v2) % space.prime());
}

inline nlohmann::json to_json(const HElement& h) { return {{"v", h.v}, {"z", h.z}}; }

/// Coset representatives of (Z.L)\H and the factorization of every vector against them.
class Transversal {
 public:
  struct Location {
    int rep = 0;    // position in reps()
    int l_idx = 0;  // index of the L-component l
    int shift = 0;  // -omega(l, u)/2, so (v, w) = (0, w + shift)(l, 0)(u, 0)
  };

  Transversal(const SymplecticSpace& space, const Lagrangian& lag) : lagrangian_(lag) {
    const int p = space.prime();
    const int d = space.dim();
    const auto& basis = lag.basis();
    const auto& piv = lag.pivots();
    locations_.resize(static_cast<size_t>(space.vector_count()));
    std::vector<int> rep_of_u(static_cast<size_t>(space.vector_count()), -1);
    for (int vi = 0; vi < space.vector_count(); ++vi) {
      const FpVector& v = space.vec(vi);
      FpVector l(static_cast<size_t>(d), 0);
      for (int i = 0; i < lag.n(); ++i)
        for (int c = 0; c < d; ++c) l[c] = mod(l[c] + static_cast<long long>(v[piv[i]]) * basis.at(i, c), p);
      FpVector u(static_cast<size_t>(d));
      for (int c = 0; c < d; ++c) u[c] = mod(v[c] - l[c], p);
      const int ui = space.index(u);
      const int li = space.index(l);
      if (rep_of_u[ui] < 0 && ui == vi) {
        rep_of_u[ui] = static_cast<int>(reps_.size());
        reps_.push_back(ui);
      }
      locations_[vi] = {ui, li, mod(-static_cast<long long>(half_mod(p)) * space.omega_idx(li, ui), p)};
    }
    // vi runs in increasing order, so reps_ is already sorted; map u index to position.
    for (auto& loc : locations_) loc.rep = rep_of_u[loc.rep];
  }

  const Lagrangian& lagrangian() const { return lagrangian_; }
  int size() const { return static_cast<int>(reps_.size()); }
  /// Vector indices of the representatives u (with z = 0), increasing.
  const std::vector<int>& rep_indices() const { return reps_; }
  const Location& locate(int vidx) const { return locations_[static_cast<size_t>(vidx)]; }

  std::vector<HElement> reps(const SymplecticSpace& space) const {
    std::vector<HElement> out;
    for (int u : reps_) out.push_back({space.vec(u), 0});
    return out;
  }

 private:
  Lagrangian lagrangian_;
  std::vector<int> reps_;
  std::vector<Location> locations_;
};

inline Transversal model_basis(const SymplecticSpace& space, const OrientedLagrangian& lo) { return Transversal(space, lo.lagrangian); }

enum class CentralCharacter { psi, psi_inverse };

inline int central_sign(CentralCharacter c) { return c == CentralCharacter::psi ? 1 : -1; }

class equivariance_mismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * A function on all of H with central character psi (or psi^{-1}) and
 * optional left invariance under an Lagrangian M and right invariance under L.
 */
class EquivariantFunction {
 public:
  EquivariantFunction() = default;

  EquivariantFunction(SpacePtr space, std::optional<Lagrangian> left, std::optional<Lagrangian> right, CentralCharacter central,
                      std::vector<CycNum> values)
      : space_(std::move(space)), left_(std::move(left)), right_(std::move(right)), central_(central), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != space_->heisenberg_order())
      throw std::invalid_argument("EquivariantFunction: need one value per element of H");
  }

  /// Extends values on {(v, 0)} to H through the central character.
  static EquivariantFunction from_slice(SpacePtr space, std::optional<Lagrangian> left, std::optional<Lagrangian> right,
                                        CentralCharacter central, const std::vector<CycNum>& slice) {
    const int p = space->prime();
    if (static_cast<int>(slice.size()) != space->vector_count()) throw std::invalid_argument("from_slice: need one value per vector");
    std::vector<CycNum> values;
    values.reserve(static_cast<size_t>(space->heisenberg_order()));
    const int s = central_sign(central);
    for (const auto& x : slice)
      for (int z = 0; z < p; ++z) values.push_back(x.times_zeta(s * z));
    return EquivariantFunction(std::move(space), std::move(left), std::move(right), central, std::move(values));
  }

  const SpacePtr& space() const { return space_; }
  const std::optional<Lagrangian>& left() const { return left_; }
  const std::optional<Lagrangian>& right() const { return right_; }
  CentralCharacter central() const { return central_; }
  const std::vector<CycNum>& values() const { return values_; }

  const CycNum& at(int h_idx) const { return values_[static_cast<size_t>(h_idx)]; }
  const CycNum& at(const HElement& h) const { return at(h_index(*space_, h)); }
  /// Value at (v, 0).
  const CycNum& at_vec(int vidx) const { return values_[static_cast<size_t>(vidx) * space_->prime()]; }

  std::vector<CycNum> slice() const {
    std::vector<CycNum> out;
    for (int v = 0; v < space_->vector_count(); ++v) out.push_back(at_vec(v));
    return out;
  }

  /// First element where an equivariance law fails, if any.
  std::optional<HElement> equivariance_violation() const {
    const auto& sp = *space_;
    const int p = sp.prime();
    const int s = central_sign(central_);
    for (int idx = 0; idx < sp.heisenberg_order(); ++idx) {
      const HElement h = h_element(sp, idx);
      for (int z = 1; z < p; ++z)
        if (at(h_index(sp, {h.v, h.z + z})) != at(idx).times_zeta(s * z)) return h;
      auto check_side = [&](const Lagrangian& lag, bool on_left) {
        for (int i = 0; i < lag.n(); ++i) {
          const HElement gen{lag.basis().row(i), 0};
          const HElement moved = on_left ? h_mul(sp, gen, h) : h_mul(sp, h, gen);
          if (at(moved) != at(idx)) return false;
        }
        return true;
      };
      if (left_ && !check_side(*left_, true)) return h;
      if (right_ && !check_side(*right_, false)) return h;
    }
    return std::nullopt;
  }

  /// Support as a list of H indices with nonzero value.
  std::vector<int> support() const {
    std::vector<int> out;
    for (size_t i = 0; i < values_.size(); ++i)
      if (!values_[i].is_zero()) out.push_back(static_cast<int>(i));
    return out;
  }

  friend bool operator==(const EquivariantFunction& a, const EquivariantFunction& b) {
    return a.left_ == b.left_ && a.right_ == b.right_ && a.central_ == b.central_ && a.values_ == b.values_;
  }

 private:
  SpacePtr space_;
  std::optional<Lagrangian> left_;
  std::optional<Lagrangian> right_;
  CentralCharacter central_ = CentralCharacter::psi;
  std::vector<CycNum> values_;
};

/// First element of H where the two tables differ.
inline std::optional<HElement> first_difference(const EquivariantFunction& a, const EquivariantFunction& b) {
  for (size_t i = 0; i < a.values().size(); ++i)
    if (a.values()[i] != b.values()[i]) return h_element(*a.space(), static_cast<int>(i));
  return std::nullopt;
}

inline nlohmann::json to_json(const EquivariantFunction& f) {
  nlohmann::json table = nlohmann::json::array();
  for (size_t i = 0; i < f.values().size(); ++i) {
    const HElement h = h_element(*f.space(), static_cast<int>(i));
    table.push_back({{"v", h.v}, {"z", h.z}, {"value", to_json(f.values()[i])}});
  }
  return table;
}

namespace detail {

inline void require_composable(const EquivariantFunction& k2, const EquivariantFunction& k1) {
  if (k2.space() != k1.space() && (k2.space()->prime() != k1.space()->prime() || k2.space()->n() != k1.space()->n()))
    throw equivariance_mismatch("convolve: functions live on different Heisenberg groups");
  if (k2.central() != k1.central()) throw equivariance_mismatch("convolve: central characters differ");
  if (k2.right() != k1.left()) throw equivariance_mismatch("convolve: right subgroup of K2 is not the left subgroup of K1");
}

}  // namespace detail

/**
 * (K2 * K1)(h) = sum over h1 in H/(Z.M) of K2(h1) K1(h1^{-1} h), where M is
 * the shared Lagrangian (or the sum runs over H/Z when there is none).
 * Evaluated on {(v, 0)} and extended by the central character.
 */
inline EquivariantFunction convolve(const EquivariantFunction& k2, const EquivariantFunction& k1) {
  detail::require_composable(k2, k1);
  const auto& sp = *k2.space();
  const int p = sp.prime();
  std::vector<int> reps;
  if (k2.right()) {
    reps = Transversal(sp, *k2.right()).rep_indices();
  } else {
    reps.resize(static_cast<size_t>(sp.vector_count()));
    for (int i = 0; i < sp.vector_count(); ++i) reps[i] = i;
  }
  std::vector<CycNum> slice(static_cast<size_t>(sp.vector_count()), CycNum(p));
  for (int v = 0; v < sp.vector_count(); ++v) {
    CycNum acc(p);
    for (int u : reps) {
      const CycNum& a = k2.at_vec(u);
      if (a.is_zero()) continue;
      // (u,0)^{-1} (v,0) = (v - u, -omega(u, v)/2)
      const int w = sp.sub_idx(v, u);
      const int z = mod(-static_cast<long long>(h_cocycle(sp, u, v)), p);
      const CycNum& b = k1.at(w * p + z);
      if (!b.is_zero()) acc += a * b;
    }
    slice[v] = std::move(acc);
  }
  return EquivariantFunction::from_slice(k2.space(), k2.left(), k1.right(), k1.central(), slice);
}

/// The same convolution as a normalized sum over all factorizations h1 h2 = h.
inline EquivariantFunction convolve_full_sum(const EquivariantFunction& k2, const EquivariantFunction& k1) {
  detail::require_composable(k2, k1);
  const auto& sp = *k2.space();
  const int p = sp.prime();
  const long long fiber = k2.right() ? ipow(p, sp.n() + 1) : p;
  const Rat norm(1, static_cast<unsigned long>(fiber));
  std::vector<CycNum> values(static_cast<size_t>(sp.heisenberg_order()), CycNum(p));
  for (int hi = 0; hi < sp.heisenberg_order(); ++hi) {
    const HElement h = h_element(sp, hi);
    CycNum acc(p);
    for (int h1i = 0; h1i < sp.heisenberg_order(); ++h1i) {
      const CycNum& a = k2.at(h1i);
      if (a.is_zero()) continue;
      const HElement h1 = h_element(sp, h1i);
      const CycNum& b = k1.at(h_mul(sp, h_inv(sp, h1), h));
      if (!b.is_zero()) acc += a * b;
    }
    values[hi] = acc.scaled(norm);
  }
  return EquivariantFunction(k2.space(), k2.left(), k1.right(), k1.central(), std::move(values));
}

/// A linear map between two Lagrangian models, in their transversal delta bases.
struct WeilOperator {
  OrientedLagrangian source;
  OrientedLagrangian target;
  CycMatrix matrix;
};

/// Right translation f -> f(. h) on the model of L, in the delta basis of its transversal.
inline CycMatrix pi_matrix(const SymplecticSpace& space, const Transversal& tr, const HElement& h) {
  const int p = space.prime();
  const int hv = space.index(h.v);
  CycMatrix m(p, tr.size(), tr.size());
  for (int s = 0; s < tr.size(); ++s) {
    const int u = tr.rep_indices()[s];
    // (u,0)(v,z) = (u+v, z + omega(u,v)/2)
    const int w = space.add_idx(u, hv);
    const long long z = static_cast<long long>(h.z) + h_cocycle(space, u, hv);
    const auto& loc = tr.locate(w);
    m.at(s, loc.rep) = psi(p, z + loc.shift);
  }
  return m;
}

inline WeilOperator pi_matrix(const SymplecticSpace& space, const OrientedLagrangian& lo, const HElement& h) {
  return {lo, lo, pi_matrix(space, Transversal(space, lo.lagrangian), h)};
}

/**
 * Dimension of {X : X pi(h) = pi(h) X} for h in a set of elements of H.
 * With `all_elements` every h in H is imposed, otherwise only the generators
 * (e_i, 0) and (0, 1).
 */
inline int commutant_dimension(const SymplecticSpace& space, const OrientedLagrangian& lo, bool all_elements = true) {
  if (space.heisenberg_order() > 5000) throw guard_exceeded("commutant_dimension: |H| too large");
  const Transversal tr(space, lo.lagrangian);
  const int d = tr.size();
  std::vector<HElement> hs;
  if (all_elements) {
    for (int i = 0; i < space.heisenberg_order(); ++i) hs.push_back(h_element(space, i));
  } else {
    for (int i = 0; i < space.dim(); ++i) {
      FpVector e(static_cast<size_t>(space.dim()), 0);
      e[i] = 1;
      hs.push_back({e, 0});
    }
    hs.push_back({FpVector(static_cast<size_t>(space.dim()), 0), 1});
  }
  IncrementalEliminator<CycNum> elim;
  auto var = [d](int r, int c) { return r * d + c; };
  for (const auto& h : hs) {
    const CycMatrix m = pi_matrix(space, tr, h);
    // (X pi)[i][j] - (pi X)[i][j]; pi is monomial.
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        std::map<int, CycNum> row;
        for (int k = 0; k < d; ++k)
          if (!m.at(k, j).is_zero()) {
            auto [it, inserted] = row.try_emplace(var(i, k), CycNum(space.prime()));
            it->second += m.at(k, j);
          }
        for (int k = 0; k < d; ++k)
          if (!m.at(i, k).is_zero()) {
            auto [it, inserted] = row.try_emplace(var(k, j), CycNum(space.prime()));
            it->second -= m.at(i, k);
          }
        elim.add_row(std::move(row));
      }
  }
  return d * d - elim.rank();
}

}  // namespace canonweil
