#pragma once

/**
 * @file weil.hpp
 * @brief The canonical model of the Weil representation and its invariant kernel.
 *
 * A vector of H(V) is a family (f_{L°}) of model vectors with
 * f_{M°} = T_{M°,L°} f_{L°} for all pairs. It is stored through its component
 * on the base L0° (least Lagrangian, orientation 1). The action is
 *   (rho(g) f)_{L0°}(h) = f_{g^{-1} L0°}(g^{-1} h),   f_{g^{-1}L0°} = T f_{L0°}.
 */

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "concurrency.hpp"
#include "cyc_matrix.hpp"
#include "cyclotomic.hpp"
#include "field_elimination.hpp"
#include "heisenberg.hpp"
#include "kernels.hpp"
#include "symplectic.hpp"

namespace canonweil {

/// Change of model g: f -> f(g^{-1} .), from the model of `source` to that of g.source.
inline CycMatrix translation_matrix(const SymplecticSpace& space, const SpElement& g_inv, const Lagrangian& source,
                                    const Lagrangian& target) {
  const Transversal in(space, source);
  const Transversal out(space, target);
  CycMatrix m(space.prime(), out.size(), in.size());
  for (int s = 0; s < out.size(); ++s) {
    const auto& loc = in.locate(space.index(g_inv.apply(space.vec(out.rep_indices()[s]))));
    m.at(s, loc.rep) = psi(space.prime(), loc.shift);
  }
  return m;
}

class WeilModel {
 public:
  explicit WeilModel(SpacePtr space)
      : space_(std::move(space)), kernels_(std::make_shared<KernelSystem>(space_)), base_{kernels_->lagrangians().front(), 1} {}
  WeilModel(SpacePtr space, std::shared_ptr<KernelSystem> kernels)
      : space_(std::move(space)), kernels_(std::move(kernels)), base_{kernels_->lagrangians().front(), 1} {}

  const SpacePtr& space() const { return space_; }
  KernelSystem& kernels() const { return *kernels_; }
  const OrientedLagrangian& base() const { return base_; }
  int dimension() const { return static_cast<int>(ipow(space_->prime(), space_->n())); }

  /// T_{M°,L°} as a matrix between transversal bases.
  WeilOperator intertwiner(const OrientedLagrangian& m, const OrientedLagrangian& l) const {
    return operator_of_kernel(kernels_->kernel(m, l), m, l);
  }

  /// rho(g) on the base model: translate after intertwining to g^{-1} L0°.
  const CycMatrix& rho(const SpElement& g) const {
    return rho_memo_.get_or_compute(g, [&] {
      const SpElement g_inv = g.inverse();
      const OrientedLagrangian pulled = act_on_olag(*space_, g_inv, base_);
      const WeilOperator t = intertwiner(pulled, base_);
      return translation_matrix(*space_, g_inv, pulled.lagrangian, base_.lagrangian) * t.matrix;
    });
  }

  /// The same operator computed as T_{L0°, g L0°} after translating to the model of g L0°.
  CycMatrix rho_alternate(const SpElement& g) const {
    const OrientedLagrangian pushed = act_on_olag(*space_, g, base_);
    const CycMatrix move = translation_matrix(*space_, g.inverse(), base_.lagrangian, pushed.lagrangian);
    return intertwiner(base_, pushed).matrix * move;
  }

  CycNum trace_character(const SpElement& g) const { return rho(g).trace(); }

  CycMatrix pi(const HElement& h) const { return pi_matrix(*space_, Transversal(*space_, base_.lagrangian), h); }

 private:
  SpacePtr space_;
  std::shared_ptr<KernelSystem> kernels_;
  OrientedLagrangian base_;
  mutable ConcurrentMemo<SpElement, CycMatrix> rho_memo_;
};

/// sigma((-1)^n det(g - I)); nullopt off the generic locus.
inline std::optional<int> character_prediction(const SymplecticSpace& space, const SpElement& g) {
  const FpMatrix minus = g.matrix() - FpMatrix::identity(space.prime(), space.dim());
  const int d = det(minus).value;
  if (d == 0) return std::nullopt;
  return sigma(space.prime(), (space.n() % 2 == 0 ? 1 : -1) * static_cast<long long>(d));
}

/// (1/p^n) sigma((-1)^n det(g-I)) psi(omega(kappa(g) v, v)/4).
inline CycNum invariant_kernel_closed(const SymplecticSpace& space, const SpElement& g, const FpVector& v) {
  const auto sign = character_prediction(space, g);
  if (!sign) throw non_generic_element("invariant_kernel_closed: det(g - I) = 0; use invariant_kernel_trace");
  const int p = space.prime();
  const FpMatrix k = cayley(space, g);
  const long long q = static_cast<long long>(quarter_mod(p)) * space.omega(k.apply(v), v);
  return psi(p, q).scaled(Rat(*sign, static_cast<unsigned long>(ipow(p, space.n()))));
}

/// K(g, v) = (1/p^n) tr(rho(g) pi((v,0)^{-1})) for every v, in vector-index order.
inline std::vector<CycNum> invariant_kernel_trace(const WeilModel& model, const SpElement& g) {
  const auto& sp = *model.space();
  const Transversal tr(sp, model.base().lagrangian);
  const CycMatrix& r = model.rho(g);
  const Rat scale(1, static_cast<unsigned long>(model.dimension()));
  std::vector<CycNum> out;
  out.reserve(static_cast<size_t>(sp.vector_count()));
  for (int v = 0; v < sp.vector_count(); ++v) {
    const CycMatrix pv = pi_matrix(sp, tr, h_inv(sp, {sp.vec(v), 0}));
    // pi is monomial, so the trace of the product only needs one entry per row.
    CycNum t(sp.prime());
    for (int s = 0; s < tr.size(); ++s)
      for (int c = 0; c < tr.size(); ++c)
        if (!pv.at(c, s).is_zero()) t += r.at(s, c) * pv.at(c, s);
    out.push_back(t.scaled(scale));
  }
  return out;
}

/// sum_v K(v) pi((v,0)) on the base model.
inline CycMatrix reconstruct_operator(const WeilModel& model, const std::vector<CycNum>& kernel) {
  const auto& sp = *model.space();
  const Transversal tr(sp, model.base().lagrangian);
  CycMatrix acc(sp.prime(), tr.size(), tr.size());
  for (int v = 0; v < sp.vector_count(); ++v)
    if (!kernel[v].is_zero()) acc = acc + pi_matrix(sp, tr, {sp.vec(v), 0}).scaled(kernel[v]);
  return acc;
}

/// (F1 * F2)(v) = sum_{v1 + v2 = v} F1(v1) F2(v2) psi(omega(v1, v2)/2).
inline std::vector<CycNum> twisted_convolve(const SymplecticSpace& space, const std::vector<CycNum>& f1, const std::vector<CycNum>& f2) {
  const int p = space.prime();
  if (static_cast<int>(f1.size()) != space.vector_count() || static_cast<int>(f2.size()) != space.vector_count())
    throw dimension_error("twisted_convolve: functions must be defined on all of V");
  std::vector<CycNum> out(static_cast<size_t>(space.vector_count()), CycNum(p));
  for (int v1 = 0; v1 < space.vector_count(); ++v1) {
    if (f1[v1].is_zero()) continue;
    for (int v2 = 0; v2 < space.vector_count(); ++v2) {
      if (f2[v2].is_zero()) continue;
      out[space.add_idx(v1, v2)] += (f1[v1] * f2[v2]).times_zeta(h_cocycle(space, v1, v2));
    }
  }
  return out;
}

/// F on V as the function (v, z) -> psi(-z) F(v) on H.
inline EquivariantFunction lift_to_heisenberg(const SpacePtr& space, const std::vector<CycNum>& f) {
  return EquivariantFunction::from_slice(space, std::nullopt, std::nullopt, CentralCharacter::psi_inverse, f);
}

inline bool rho_multiplicative(const WeilModel& model, const SpElement& g, const SpElement& h) {
  return model.rho(g) * model.rho(h) == model.rho(g * h);
}

/// Result of comparing rho(w), w = [[0, -B^{-1}], [B, 0]], with the kernel psi(s B(x, y)).
struct DftReport {
  SpElement w;
  CycMatrix matrix;
  /// Proportionality to psi(B(x, y)): the constant, or nullopt if there is none.
  std::optional<CycNum> gamma;
  bool gamma_modulus_ok = false;
  /// Proportionality to psi(-B(x, y)).
  std::optional<CycNum> gamma_conjugate_kernel;
  bool gamma_conjugate_modulus_ok = false;
  /// First (x, y) (transversal positions) where psi(B) proportionality breaks.
  std::optional<std::pair<int, int>> witness;
};

inline SpElement dft_element(const SymplecticSpace& space, const FpMatrix& b) {
  const int n = space.n();
  const int p = space.prime();
  if (b.rows() != n || b.cols() != n || b.prime() != p) throw dimension_error("dft_element: B must be n x n over F_p");
  if (b.transpose() != b) throw std::invalid_argument("dft_element: B must be symmetric");
  if (det(b).value == 0) throw std::invalid_argument("dft_element: B must be nondegenerate");
  const FpMatrix b_inv = inverse(b);
  FpMatrix w(p, 2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      w.set(i, n + j, mod(-b_inv.at(i, j), p));
      w.set(n + i, j, b.at(i, j));
    }
  return SpElement::checked(space, w);
}

inline DftReport dft_check(const WeilModel& model, const FpMatrix& b) {
  const auto& sp = *model.space();
  const int p = sp.prime();
  const int n = sp.n();
  const Transversal tr(sp, model.base().lagrangian);
  DftReport rep{dft_element(sp, b), {}, {}, false, {}, false, {}};
  rep.matrix = model.rho(rep.w);
  // Transversal labels: the free coordinates of the base Lagrangian, in order.
  std::vector<int> free;
  for (int c = 0; c < sp.dim(); ++c)
    if (std::find(model.base().lagrangian.pivots().begin(), model.base().lagrangian.pivots().end(), c) ==
        model.base().lagrangian.pivots().end())
      free.push_back(c);
  auto label = [&](int s) {
    FpVector x(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) x[i] = sp.vec(tr.rep_indices()[s])[free[i]];
    return x;
  };
  auto bilinear = [&](const FpVector& x, const FpVector& y) {
    long long acc = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) acc += static_cast<long long>(x[i]) * b.at(i, j) * y[j];
    return acc;
  };
  const Rat target(1, static_cast<unsigned long>(ipow(p, n)));
  auto fit = [&](int sign, std::optional<std::pair<int, int>>* witness) -> std::optional<CycNum> {
    const CycNum gamma = rep.matrix.at(0, 0).times_zeta(-sign * bilinear(label(0), label(0)));
    for (int s = 0; s < tr.size(); ++s)
      for (int t = 0; t < tr.size(); ++t)
        if (rep.matrix.at(s, t) != gamma.times_zeta(sign * bilinear(label(s), label(t)))) {
          if (witness) *witness = std::make_pair(s, t);
          return std::nullopt;
        }
    return gamma;
  };
  auto modulus_ok = [&](const std::optional<CycNum>& g) { return g && *g * g->conjugate() == CycNum::rational(p, target); };
  rep.gamma = fit(1, &rep.witness);
  rep.gamma_modulus_ok = modulus_ok(rep.gamma);
  rep.gamma_conjugate_kernel = fit(-1, nullptr);
  rep.gamma_conjugate_modulus_ok = modulus_ok(rep.gamma_conjugate_kernel);
  return rep;
}

/**
 * Dimension of the space of horizontal families (f_{L°}) with
 * f_{M°} = T_{M°,L°} f_{L°} for every ordered pair, by exact elimination.
 */
inline int horizontal_dimension(const WeilModel& model) {
  const auto& sp = *model.space();
  const auto olag = enumerate_oriented(sp);
  const int d = model.dimension();
  // Unknowns block by block; the base block goes last so that the equations
  // through the base eliminate every other block first.
  std::vector<OrientedLagrangian> order;
  for (const auto& lo : olag)
    if (!(lo == model.base())) order.push_back(lo);
  order.push_back(model.base());
  std::map<OrientedLagrangian, int> block;
  for (size_t i = 0; i < order.size(); ++i) block[order[i]] = static_cast<int>(i) * d;
  IncrementalEliminator<CycNum> elim;
  auto add_pair = [&](const OrientedLagrangian& m, const OrientedLagrangian& l) {
    const CycMatrix t = model.intertwiner(m, l).matrix;
    for (int r = 0; r < d; ++r) {
      std::map<int, CycNum> row;
      row.try_emplace(block[m] + r, CycNum::one(sp.prime()));
      for (int c = 0; c < d; ++c) {
        if (t.at(r, c).is_zero()) continue;
        auto [it, inserted] = row.try_emplace(block[l] + c, CycNum(sp.prime()));
        it->second -= t.at(r, c);
      }
      elim.add_row(std::move(row));
    }
  };
  for (const auto& m : olag) add_pair(m, model.base());
  for (const auto& m : olag)
    for (const auto& l : olag) add_pair(m, l);
  return static_cast<int>(order.size()) * d - elim.rank();
}

/// For each basis vector of the base model, checks f_{M°} = T_{M°,L°} f_{L°} on every pair of the section it generates.
inline std::optional<std::pair<OrientedLagrangian, OrientedLagrangian>> horizontality_violation(const WeilModel& model) {
  const auto olag = enumerate_oriented(*model.space());
  std::map<OrientedLagrangian, CycMatrix> section;  // columns = the basis of H(V)
  for (const auto& lo : olag) section.emplace(lo, model.intertwiner(lo, model.base()).matrix);
  for (const auto& m : olag)
    for (const auto& l : olag)
      if (model.intertwiner(m, l).matrix * section.at(l) != section.at(m)) return std::make_pair(m, l);
  return std::nullopt;
}

struct ConjugacyClass {
  SpElement representative;  // least element of the class
  int size = 0;
};

/// Conjugacy classes of an enumerated group, sorted by representative.
inline std::vector<ConjugacyClass> conjugacy_classes(const std::vector<SpElement>& group) {
  std::map<SpElement, int> class_of;
  std::vector<ConjugacyClass> out;
  for (const auto& g : group) {
    if (class_of.count(g)) continue;
    std::vector<SpElement> members;
    for (const auto& x : group) members.push_back(x * g * x.inverse());
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    const int id = static_cast<int>(out.size());
    for (const auto& m : members) class_of[m] = id;
    out.push_back({members.front(), static_cast<int>(members.size())});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.representative < b.representative; });
  return out;
}

struct CharacterRow {
  ConjugacyClass cls;
  CycNum trace;
  std::optional<int> prediction;
  bool match = true;  // vacuous off the generic locus
};

inline std::vector<CharacterRow> character_table(const WeilModel& model) {
  const auto& sp = *model.space();
  std::vector<CharacterRow> rows;
  for (const auto& cls : conjugacy_classes(sp_enumerate(sp))) {
    CharacterRow row{cls, model.trace_character(cls.representative), character_prediction(sp, cls.representative), true};
    if (row.prediction) row.match = row.trace == CycNum::integer(sp.prime(), *row.prediction);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace canonweil
