#pragma once

/**
 * @file suites.hpp
 * @brief Named verification suites and their JSON / CSV reports.
 *
 * Whether a suite is exhaustive or sampled depends only on (p, n). Sampled
 * suites draw `samples` inputs from std::mt19937_64(seed); Sp elements come
 * from sp_random with the same seed.
 */

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "coherence.hpp"
#include "concurrency.hpp"
#include "cyclotomic.hpp"
#include "heisenberg.hpp"
#include "kernels.hpp"
#include "symplectic.hpp"
#include "weil.hpp"

namespace canonweil {

inline constexpr const char* kVersion = "0.1.0";

class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ReportFormat { json, csv };

struct SuiteConfig {
  int p = 3;
  int n = 1;
  std::string suite = "all";
  int samples = 100;
  std::uint64_t seed = 0;
  std::string out = "-";
  ReportFormat format = ReportFormat::json;
  bool timing = false;
};

struct CheckRecord {
  std::string check_id;
  bool passed = true;
  nlohmann::json witness;  // null when passed
};

struct SuiteResult {
  std::string suite;
  std::string mode;  // exhaustive, sampled or fixed
  std::vector<CheckRecord> checks;
  nlohmann::json observations = nlohmann::json::object();
  std::optional<std::string> skipped;

  size_t passed() const {
    size_t k = 0;
    for (const auto& c : checks) k += c.passed ? 1 : 0;
    return k;
  }
  size_t failed() const { return checks.size() - passed(); }
};

struct Report {
  SuiteConfig config;
  std::vector<SuiteResult> suites;
  double duration_ms = 0;

  bool all_passed() const {
    for (const auto& s : suites)
      if (s.failed() > 0) return false;
    return true;
  }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"gauss",         "lagrangian-counts", "kernel-mult",     "c1-associativity",
                                              "operators",     "sp-invariance",     "weil-homomorphism", "character-table",
                                              "invariant-kernel", "dft",            "coherence"};
  return names;
}

inline bool supported_size(int p, int n) {
  return (n == 1 && (p == 3 || p == 5 || p == 7 || p == 11)) || (n == 2 && p == 3);
}

inline void validate(const SuiteConfig& c) {
  if (!supported_size(c.p, c.n))
    throw config_error("unsupported (p, n) = (" + std::to_string(c.p) + ", " + std::to_string(c.n) +
                       "); supported: (3,1), (5,1), (7,1), (11,1), (3,2)");
  if (c.samples < 0) throw config_error("--samples must be nonnegative");
  if (c.suite != "all" && std::find(suite_names().begin(), suite_names().end(), c.suite) == suite_names().end())
    throw config_error("unknown suite '" + c.suite + "'");
}

/// Shared state for one (p, n): kernels and rho are materialized once across suites.
class SuiteContext {
 public:
  explicit SuiteContext(const SuiteConfig& config)
      : config_(config), space_(make_space(config.p, config.n)), model_(space_), olag_(enumerate_oriented(*space_)) {}

  const SuiteConfig& config() const { return config_; }
  const SpacePtr& space() const { return space_; }
  const SymplecticSpace& sp() const { return *space_; }
  const WeilModel& model() const { return model_; }
  KernelSystem& kernels() const { return model_.kernels(); }
  const std::vector<OrientedLagrangian>& olag() const { return olag_; }

  const std::vector<SpElement>& group() const {
    std::call_once(group_once_, [&] { group_ = sp_enumerate(*space_); });
    return group_;
  }
  bool group_enumerable() const { return sp_order_formula(config_.p, config_.n) <= 100000; }

  /// `count` tuples of indices below `bound`, each drawn as rng() % bound.
  std::vector<std::vector<int>> sample_tuples(int count, int arity, int bound, std::uint64_t salt) const {
    std::mt19937_64 rng(config_.seed ^ salt);
    std::vector<std::vector<int>> out(static_cast<size_t>(count), std::vector<int>(static_cast<size_t>(arity)));
    for (auto& t : out)
      for (auto& x : t) x = static_cast<int>(rng() % static_cast<std::uint64_t>(bound));
    return out;
  }

 private:
  SuiteConfig config_;
  SpacePtr space_;
  WeilModel model_;
  std::vector<OrientedLagrangian> olag_;
  mutable std::once_flag group_once_;
  mutable std::vector<SpElement> group_;
};

namespace detail {

inline nlohmann::json h_witness(const std::optional<HElement>& h) { return h ? to_json(*h) : nlohmann::json(); }

inline std::string join_ids(const std::vector<int>& ids) {
  std::string s;
  for (size_t i = 0; i < ids.size(); ++i) s += (i ? "," : "") + std::to_string(ids[i]);
  return s;
}

/// Runs `count` independent checks on the worker pool, keeping index order.
inline std::vector<CheckRecord> run_checks(size_t count, const std::function<CheckRecord(size_t)>& fn) {
  std::vector<CheckRecord> out(count);
  parallel_for(count, [&](size_t i) { out[i] = fn(i); });
  return out;
}

inline CheckRecord kernel_record(const std::string& id, const CheckOutcome& r, const std::vector<OrientedLagrangian>& inputs) {
  CheckRecord rec{id, r.passed, nullptr};
  if (!r.passed) {
    nlohmann::json in = nlohmann::json::array();
    for (const auto& lo : inputs) in.push_back(to_json(lo));
    rec.witness = {{"inputs", in}, {"h", h_witness(r.witness)}};
  }
  return rec;
}

/// All index tuples of the given arity, or `samples` seeded ones when that would exceed `limit`.
inline std::pair<std::string, std::vector<std::vector<int>>> tuples(const SuiteContext& ctx, int arity, long long limit,
                                                                      std::uint64_t salt) {
  const int bound = static_cast<int>(ctx.olag().size());
  if (ipow(bound, arity) <= limit) {
    std::vector<std::vector<int>> all;
    std::vector<int> t(static_cast<size_t>(arity), 0);
    while (true) {
      all.push_back(t);
      int k = arity - 1;
      while (k >= 0 && ++t[k] == bound) t[k--] = 0;
      if (k < 0) break;
    }
    return {"exhaustive", all};
  }
  return {"sampled", ctx.sample_tuples(ctx.config().samples, arity, bound, salt)};
}

}  // namespace detail

inline SuiteResult suite_gauss(const SuiteContext& ctx) {
  const int p = ctx.config().p;
  const CycNum g = gauss_sum(p);
  SuiteResult r{"gauss", "exhaustive", {}, {}, {}};
  const CycNum square = g * g;
  const CycNum expected = CycNum::integer(p, sigma(p, -1) * p);
  r.checks.push_back({"square", square == expected, square == expected ? nlohmann::json() : to_json(square)});
  const CycNum norm = g * g.conjugate();
  r.checks.push_back({"norm", norm == CycNum::integer(p, p), norm == CycNum::integer(p, p) ? nlohmann::json() : to_json(norm)});
  r.observations = {{"gauss_sum", to_json(g)}, {"sigma_minus_one", sigma(p, -1)}};
  return r;
}

inline SuiteResult suite_lagrangian_counts(const SuiteContext& ctx) {
  const auto& sp = ctx.sp();
  SuiteResult r{"lagrangian-counts", "exhaustive", {}, {}, {}};
  const auto lags = enumerate_lagrangians(sp);
  const long long expected = lagrangian_count_formula(sp.prime(), sp.n());
  auto count_record = [](const std::string& id, long long got, long long want) {
    return CheckRecord{id, got == want, got == want ? nlohmann::json() : nlohmann::json{{"counted", got}, {"expected", want}}};
  };
  r.checks.push_back(count_record("lagrangians", static_cast<long long>(lags.size()), expected));
  r.checks.push_back(count_record("oriented", static_cast<long long>(ctx.olag().size()), expected * (sp.prime() - 1)));
  // Each enumerated subspace is isotropic of rank n and appears once.
  bool distinct = std::adjacent_find(lags.begin(), lags.end()) == lags.end();
  bool valid = true;
  for (const auto& l : lags) {
    const FpMatrix gram = l.basis() * sp.gram() * l.basis().transpose();
    valid = valid && rank(l.basis()) == sp.n() && gram == FpMatrix(sp.prime(), sp.n(), sp.n());
  }
  r.checks.push_back({"isotropic-rank-n", valid && distinct, nullptr});
  r.observations = {{"lagrangians", static_cast<long long>(lags.size())}, {"oriented", static_cast<long long>(ctx.olag().size())}};
  return r;
}

inline SuiteResult suite_kernel_mult(const SuiteContext& ctx) {
  auto [mode, triples] = detail::tuples(ctx, 3, 512, 0x6b6d);
  SuiteResult r{"kernel-mult", mode, {}, {}, {}};
  const auto& ol = ctx.olag();
  r.checks = detail::run_checks(triples.size(), [&](size_t i) {
    const auto& t = triples[i];
    return detail::kernel_record("triple:" + detail::join_ids(t), multiplicativity_check(ctx.kernels(), ol[t[0]], ol[t[1]], ol[t[2]]),
                                 {ol[t[0]], ol[t[1]], ol[t[2]]});
  });
  return r;
}

/// Indices into OLag of the fixed subset {(L0,1), (L0,2), (L1,1), (L2,1)} (orientation 2 read mod p).
inline std::vector<int> c1_fixed_subset(const SuiteContext& ctx) {
  const auto& ol = ctx.olag();
  const auto& lags = ctx.kernels().lagrangians();
  auto find = [&](const Lagrangian& l, int c) {
    for (size_t i = 0; i < ol.size(); ++i)
      if (ol[i].lagrangian == l && ol[i].orient == mod(c, ctx.config().p)) return static_cast<int>(i);
    throw std::logic_error("c1_fixed_subset: oriented Lagrangian missing");
  };
  return {find(lags[0], 1), find(lags[0], 2), find(lags[1], 1), find(lags[2], 1)};
}

inline SuiteResult suite_c1(const SuiteContext& ctx) {
  const auto& ol = ctx.olag();
  std::vector<std::vector<int>> quads;
  std::string mode;
  if (ctx.config().p == 3 && ctx.config().n == 1) {
    mode = "fixed";
    const auto subset = c1_fixed_subset(ctx);
    for (int a : subset)
      for (int b : subset)
        for (int c : subset)
          for (int d : subset) quads.push_back({a, b, c, d});
  } else {
    mode = "sampled";
    quads = ctx.sample_tuples(ctx.config().samples, 4, static_cast<int>(ol.size()), 0x6331);
  }
  quads.push_back({0, 0, 0, 0});
  SuiteResult r{"c1-associativity", mode, {}, {}, {}};
  r.checks = detail::run_checks(quads.size(), [&](size_t i) {
    const auto& q = quads[i];
    const std::string id = (i + 1 == quads.size() ? "repeated:" : "quadruple:") + detail::join_ids(q);
    return detail::kernel_record(id, associativity_c1_check(ctx.kernels(), ol[q[0]], ol[q[1]], ol[q[2]], ol[q[3]]),
                                 {ol[q[0]], ol[q[1]], ol[q[2]], ol[q[3]]});
  });
  return r;
}

/// T = A F, intertwining, commutant dimension, and the scalar of T_{(L, c o), (L, o)}.
inline SuiteResult suite_operators(const SuiteContext& ctx) {
  const auto& sp = ctx.sp();
  const auto& ol = ctx.olag();
  auto [mode, pairs] = detail::tuples(ctx, 2, 1024, 0x6f70);
  SuiteResult r{"operators", mode, {}, {}, {}};
  auto af = detail::run_checks(pairs.size(), [&](size_t i) {
    const auto& m = ol[pairs[i][0]];
    const auto& l = ol[pairs[i][1]];
    const std::string id = "pair:" + detail::join_ids(pairs[i]);
    const WeilOperator t = ctx.model().intertwiner(m, l);
    const CheckOutcome inter = intertwining_check(sp, t);
    CheckRecord rec{id, inter.passed, nullptr};
    if (!inter.passed) rec.witness = {{"failure", "intertwining"}, {"h", detail::h_witness(inter.witness)}};
    if (rec.passed && transverse(sp, m.lagrangian, l.lagrangian) &&
        averaging_F(sp, m, l).matrix.scaled(normalization_A(sp, m, l)) != t.matrix) {
      rec.passed = false;
      rec.witness = {{"failure", "T != A F"}};
    }
    return rec;
  });
  r.checks = std::move(af);
  for (size_t i = 0; i < ol.size(); ++i) {
    const int dim = commutant_dimension(sp, ol[i], sp.heisenberg_order() <= 500);
    r.checks.push_back({"commutant:" + std::to_string(i), dim == 1, dim == 1 ? nlohmann::json() : nlohmann::json{{"dimension", dim}}});
  }
  nlohmann::json scalars = nlohmann::json::array();
  for (int c = 1; c < sp.prime(); ++c) {
    const auto s = scalar_value(reorientation_operator(ctx.kernels(), {ctx.kernels().lagrangians().front(), 1}, c).matrix);
    scalars.push_back({{"c", c}, {"sigma_c", sigma(sp.prime(), c)}, {"scalar", s ? to_json(*s) : nlohmann::json()}});
  }
  r.observations = {{"reorientation_scalars", scalars}};
  return r;
}

inline SuiteResult suite_sp_invariance(const SuiteContext& ctx) {
  const auto& sp = ctx.sp();
  const auto& ol = ctx.olag();
  const long long pairs = static_cast<long long>(ol.size()) * static_cast<long long>(ol.size());
  SuiteResult r{"sp-invariance", "", {}, {}, {}};
  struct Job {
    SpElement g;
    int g_id;
    int m;
    int l;
  };
  std::vector<Job> jobs;
  if (ctx.group_enumerable() && sp_order_formula(sp.prime(), sp.n()) * pairs <= 100000) {
    r.mode = "exhaustive";
    const auto& group = ctx.group();
    for (size_t g = 0; g < group.size(); ++g)
      for (int m = 0; m < static_cast<int>(ol.size()); ++m)
        for (int l = 0; l < static_cast<int>(ol.size()); ++l) jobs.push_back({group[g], static_cast<int>(g), m, l});
  } else {
    r.mode = "sampled";
    const int count = ctx.config().samples;
    const auto gs = sp_random(sp, ctx.config().seed, count);
    const auto idx = ctx.sample_tuples(count, 2, static_cast<int>(ol.size()), 0x7370);
    for (int i = 0; i < count; ++i) jobs.push_back({gs[i], i, idx[i][0], idx[i][1]});
  }
  r.checks = detail::run_checks(jobs.size(), [&](size_t i) {
    const auto& j = jobs[i];
    const CheckOutcome out = sp_invariance_check(ctx.kernels(), j.g, ol[j.m], ol[j.l]);
    CheckRecord rec = detail::kernel_record("g:" + std::to_string(j.g_id) + ",pair:" + std::to_string(j.m) + "," + std::to_string(j.l),
                                            out, {ol[j.m], ol[j.l]});
    if (!out.passed) rec.witness["g"] = to_json(j.g);
    return rec;
  });
  return r;
}

inline SuiteResult suite_weil_homomorphism(const SuiteContext& ctx) {
  const auto& sp = ctx.sp();
  const auto& model = ctx.model();
  SuiteResult r{"weil-homomorphism", "", {}, {}, {}};
  std::vector<std::pair<SpElement, SpElement>> pairs;
  std::vector<std::string> ids;
  std::vector<SpElement> singles;
  const bool exhaustive = ctx.group_enumerable() && sp_order_formula(sp.prime(), sp.n()) <= 120;
  if (exhaustive) {
    r.mode = "exhaustive";
    const auto& group = ctx.group();
    singles = group;
    for (size_t a = 0; a < group.size(); ++a)
      for (size_t b = 0; b < group.size(); ++b) {
        pairs.emplace_back(group[a], group[b]);
        ids.push_back("pair:" + std::to_string(a) + "," + std::to_string(b));
      }
  } else {
    r.mode = "sampled";
    const auto gs = sp_random(sp, ctx.config().seed, 2 * ctx.config().samples);
    for (int i = 0; i < ctx.config().samples; ++i) {
      pairs.emplace_back(gs[2 * i], gs[2 * i + 1]);
      ids.push_back("sample:" + std::to_string(i));
      singles.push_back(gs[2 * i]);
    }
  }
  // Materialize rho serially so the memo fills in a fixed order.
  for (const auto& [g, h] : pairs) model.rho(g * h);
  r.checks = detail::run_checks(pairs.size(), [&](size_t i) {
    const auto& [g, h] = pairs[i];
    const bool ok = rho_multiplicative(model, g, h);
    return CheckRecord{ids[i], ok, ok ? nlohmann::json() : nlohmann::json{{"g", to_json(g)}, {"h", to_json(h)}}};
  });
  for (size_t i = 0; i < singles.size(); ++i) {
    const bool ok = model.rho(singles[i]) == model.rho_alternate(singles[i]);
    r.checks.push_back({"alternate:" + std::to_string(i), ok, ok ? nlohmann::json() : nlohmann::json{{"g", to_json(singles[i])}}});
  }
  const bool id_ok = model.rho(SpElement::identity(sp)) == CycMatrix::identity(sp.prime(), model.dimension());
  r.checks.push_back({"identity", id_ok, nullptr});
  r.observations["dimension"] = model.dimension();
  if (sp.n() == 1 && sp.prime() <= 5) {
    const int dim = horizontal_dimension(model);
    r.checks.push_back({"horizontal-dimension", dim == model.dimension(), dim == model.dimension() ? nlohmann::json() : nlohmann::json{{"dimension", dim}}});
    r.observations["horizontal_dimension"] = dim;
    const auto bad = horizontality_violation(model);
    r.checks.push_back({"horizontal-sections", !bad, bad ? nlohmann::json{{"m", to_json(bad->first)}, {"l", to_json(bad->second)}} : nlohmann::json()});
  }
  return r;
}

inline SuiteResult suite_character_table(const SuiteContext& ctx) {
  if (ctx.sp().n() != 1) throw guard_exceeded("character-table: conjugacy classes are enumerated only for n = 1");
  SuiteResult r{"character-table", "exhaustive", {}, {}, {}};
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : character_table(ctx.model())) {
    const nlohmann::json entry{{"representative", to_json(row.cls.representative)},
                               {"size", row.cls.size},
                               {"trace", to_json(row.trace)},
                               {"prediction", row.prediction ? nlohmann::json(*row.prediction) : nlohmann::json()},
                               {"match", row.match}};
    rows.push_back(entry);
    r.checks.push_back({"class:" + detail::join_ids(row.cls.representative.matrix().entries()), row.match, row.match ? nlohmann::json() : entry});
  }
  r.observations = {{"classes", rows}};
  return r;
}

inline SuiteResult suite_invariant_kernel(const SuiteContext& ctx) {
  const auto& sp = ctx.sp();
  const auto& model = ctx.model();
  SuiteResult r{"invariant-kernel", "", {}, {}, {}};
  std::vector<SpElement> elements;
  if (sp.n() == 1 && ctx.group_enumerable()) {
    r.mode = "exhaustive";
    elements = ctx.group();
  } else {
    r.mode = "sampled";
    elements = sp_random(sp, ctx.config().seed, ctx.config().samples);
  }
  std::vector<std::vector<CycNum>> kernels(elements.size());
  for (size_t i = 0; i < elements.size(); ++i) kernels[i] = invariant_kernel_trace(model, elements[i]);
  int generic = 0;
  for (size_t i = 0; i < elements.size(); ++i) {
    const auto& g = elements[i];
    const bool recon = reconstruct_operator(model, kernels[i]) == model.rho(g);
    r.checks.push_back({"reconstruction:" + std::to_string(i), recon, recon ? nlohmann::json() : nlohmann::json{{"g", to_json(g)}}});
    if (!character_prediction(sp, g)) continue;
    ++generic;
    std::optional<int> bad;
    for (int v = 0; v < sp.vector_count() && !bad; ++v)
      if (kernels[i][v] != invariant_kernel_closed(sp, g, sp.vec(v))) bad = v;
    r.checks.push_back({"closed-formula:" + std::to_string(i), !bad,
                        bad ? nlohmann::json{{"g", to_json(g)}, {"v", sp.vec(*bad)}} : nlohmann::json()});
  }
  const auto gs = sp_random(sp, ctx.config().seed ^ 0x636f, 2 * ctx.config().samples);
  for (int i = 0; i < ctx.config().samples; ++i) {
    const auto& g1 = gs[2 * i];
    const auto& g2 = gs[2 * i + 1];
    const bool ok = twisted_convolve(sp, invariant_kernel_trace(model, g1), invariant_kernel_trace(model, g2)) ==
                    invariant_kernel_trace(model, g1 * g2);
    r.checks.push_back({"convolution:" + std::to_string(i), ok, ok ? nlohmann::json() : nlohmann::json{{"g1", to_json(g1)}, {"g2", to_json(g2)}}});
  }
  r.observations = {{"elements", static_cast<long long>(elements.size())}, {"generic", generic}};
  return r;
}

/// B = diag(b, 1, ..., 1) for b = 1, 2.
inline SuiteResult suite_dft(const SuiteContext& ctx) {
  const auto& sp = ctx.sp();
  SuiteResult r{"dft", "fixed", {}, {}, {}};
  nlohmann::json obs = nlohmann::json::array();
  for (int b = 1; b <= 2; ++b) {
    FpMatrix form = FpMatrix::identity(sp.prime(), sp.n());
    form.set(0, 0, b);
    const DftReport rep = dft_check(ctx.model(), form);
    const bool ok = rep.gamma.has_value() && rep.gamma_modulus_ok;
    nlohmann::json entry{{"B", form.entries()},
                         {"w", to_json(rep.w)},
                         {"gamma", rep.gamma ? to_json(*rep.gamma) : nlohmann::json()},
                         {"gamma_modulus_ok", rep.gamma_modulus_ok},
                         {"gamma_for_psi_minus_B", rep.gamma_conjugate_kernel ? to_json(*rep.gamma_conjugate_kernel) : nlohmann::json()},
                         {"psi_minus_B_modulus_ok", rep.gamma_conjugate_modulus_ok}};
    obs.push_back(entry);
    nlohmann::json witness;
    if (!ok) {
      witness = entry;
      if (rep.witness) witness["first_mismatch"] = {rep.witness->first, rep.witness->second};
      witness["matrix"] = to_json(rep.matrix);
    }
    r.checks.push_back({"B=" + std::to_string(b), ok, witness});
  }
  r.observations = {{"forms", obs}};
  return r;
}

inline SuiteResult suite_coherence(const SuiteContext&) {
  SuiteResult r{"coherence", "exhaustive", {}, {}, {}};
  nlohmann::json obs = nlohmann::json::array();
  for (int n = 4; n <= 6; ++n) {
    const CoherenceReport rep = coherence_report(n);
    obs.push_back(to_json(rep));
    const bool ok = rep.verdict.kind == Verdict::Kind::identity;
    r.checks.push_back({"strands:" + std::to_string(n), ok, ok ? nlohmann::json() : to_json(rep)});
  }
  const auto pentagon = parallel_relations(4);
  const bool ok = pentagon == std::set<std::pair<int, int>>{{2, 3}};
  r.checks.push_back({"pentagon", ok, ok ? nlohmann::json() : nlohmann::json{{"relations", pentagon}}});
  r.observations = {{"reports", obs}};
  return r;
}

inline SuiteResult run_named_suite(const SuiteContext& ctx, const std::string& name) {
  static const std::map<std::string, std::function<SuiteResult(const SuiteContext&)>> table{
      {"gauss", suite_gauss},
      {"lagrangian-counts", suite_lagrangian_counts},
      {"kernel-mult", suite_kernel_mult},
      {"c1-associativity", suite_c1},
      {"operators", suite_operators},
      {"sp-invariance", suite_sp_invariance},
      {"weil-homomorphism", suite_weil_homomorphism},
      {"character-table", suite_character_table},
      {"invariant-kernel", suite_invariant_kernel},
      {"dft", suite_dft},
      {"coherence", suite_coherence},
  };
  auto it = table.find(name);
  if (it == table.end()) throw config_error("unknown suite '" + name + "'");
  return it->second(ctx);
}

/// Runs one suite (guard violations are configuration errors) or all of them (guarded ones are skipped).
inline Report run_suite(const SuiteConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  Report report{config, {}, 0};
  const SuiteContext ctx(config);
  if (config.suite == "all") {
    for (const auto& name : suite_names()) {
      try {
        report.suites.push_back(run_named_suite(ctx, name));
      } catch (const guard_exceeded& e) {
        SuiteResult skipped{name, "skipped", {}, {}, e.what()};
        report.suites.push_back(std::move(skipped));
      }
    }
  } else {
    try {
      report.suites.push_back(run_named_suite(ctx, config.suite));
    } catch (const guard_exceeded& e) {
      throw config_error(e.what());
    }
  }
  report.duration_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

inline nlohmann::json to_json(const SuiteResult& s, const SuiteConfig& c) {
  nlohmann::json witnesses = nlohmann::json::array();
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& ch : s.checks) {
    checks.push_back({{"check_id", ch.check_id}, {"status", ch.passed ? "pass" : "fail"}, {"witness", ch.witness}});
    if (!ch.passed) witnesses.push_back({{"check_id", ch.check_id}, {"witness", ch.witness}});
  }
  nlohmann::json j{{"suite", s.suite}, {"p", c.p},           {"n", c.n},
                   {"mode", s.mode},   {"total", s.checks.size()}, {"passed", s.passed()},
                   {"failed", s.failed()}, {"witnesses", witnesses}, {"observations", s.observations},
                   {"checks", checks}};
  if (s.skipped) j["skipped"] = *s.skipped;
  return j;
}

inline nlohmann::json to_json(const Report& r) {
  const auto& c = r.config;
  nlohmann::json suites = nlohmann::json::array();
  for (const auto& s : r.suites) suites.push_back(to_json(s, c));
  nlohmann::json j{
      {"artifact", "weilverify"},
      {"version", kVersion},
      {"config",
       {{"p", c.p}, {"n", c.n}, {"suite", c.suite}, {"samples", c.samples}, {"seed", c.seed}, {"format", c.format == ReportFormat::json ? "json" : "csv"}}},
      {"random", {{"generator", "std::mt19937_64"}, {"choice", "rng() % k"}, {"sp_walk_length", kRandomWalkLength}}},
      {"status", r.all_passed() ? "pass" : "fail"},
      {"suites", suites}};
  if (c.timing) j["duration_ms"] = r.duration_ms;
  return j;
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

/**
 * CSV: one row per check with columns suite, check_id, status, witness.
 * A lone character-table run prints the table itself (one row per class).
 */
inline std::string to_csv(const Report& r) {
  std::ostringstream out;
  if (r.config.suite == "character-table" && r.suites.size() == 1) {
    out << "representative,size,trace,prediction,match\n";
    for (const auto& row : r.suites[0].observations.value("classes", nlohmann::json::array()))
      out << csv_quote(row["representative"].dump()) << ',' << row["size"].get<int>() << ',' << csv_quote(row["trace"].dump()) << ','
          << (row["prediction"].is_null() ? "" : row["prediction"].dump()) << ',' << (row["match"].get<bool>() ? "true" : "false") << '\n';
    return out.str();
  }
  out << "suite,check_id,status,witness\n";
  for (const auto& s : r.suites)
    for (const auto& c : s.checks)
      out << csv_quote(s.suite) << ',' << csv_quote(c.check_id) << ',' << (c.passed ? "pass" : "fail") << ','
          << (c.witness.is_null() ? "" : csv_quote(c.witness.dump())) << '\n';
  return out.str();
}

inline std::string emit_report(const Report& r) { return r.config.format == ReportFormat::json ? to_json(r).dump(2) + "\n" : to_csv(r); }

/// 0 when every check passes, 1 otherwise.
inline int exit_status(const Report& r) { return r.all_passed() ? 0 : 1; }

}  // namespace canonweil
