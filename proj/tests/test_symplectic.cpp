#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace canonweil;

namespace {

Lagrangian line(const SymplecticSpace& sp, int a, int b) { return Lagrangian::from_span(sp, FpMatrix(sp.prime(), {{a, b}})); }

}  // namespace

TEST(Symplectic, OmegaExamples) {
  const SymplecticSpace sp(3, 1);
  EXPECT_EQ(sp.omega({1, 0}, {1, 0}), 0);
  EXPECT_EQ(sp.omega({1, 0}, {0, 1}), 1);
  EXPECT_EQ(sp.omega({0, 2}, {1, 0}), 1);
  EXPECT_THROW(sp.omega({1, 0, 0}, {1, 0}), dimension_error);
}

TEST(Symplectic, OmegaMatchesWrittenOutForm) {
  for (auto [p, n] : {std::pair{3, 1}, {5, 1}, {3, 2}}) {
    const SymplecticSpace sp(p, n);
    for (int a = 0; a < sp.vector_count(); ++a)
      for (int b = 0; b < sp.vector_count(); ++b) {
        EXPECT_EQ(sp.omega_idx(a, b), oracle::omega(p, sp.vec(a), sp.vec(b)));
        EXPECT_EQ(sp.omega_idx(a, b), mod(-sp.omega_idx(b, a), p));
      }
  }
}

TEST(Symplectic, LagrangianEnumerationExamples) {
  const SymplecticSpace sp(3, 1);
  const auto lags = enumerate_lagrangians(sp);
  ASSERT_EQ(lags.size(), 4u);
  const std::set<Lagrangian> expected{line(sp, 1, 0), line(sp, 0, 1), line(sp, 1, 1), line(sp, 1, 2)};
  EXPECT_EQ(std::set<Lagrangian>(lags.begin(), lags.end()), expected);
  EXPECT_TRUE(std::is_sorted(lags.begin(), lags.end()));
  EXPECT_EQ(enumerate_lagrangians(SymplecticSpace(5, 1)).size(), 6u);
  EXPECT_EQ(enumerate_lagrangians(SymplecticSpace(3, 2)).size(), 40u);
  EXPECT_EQ(enumerate_oriented(SymplecticSpace(3, 1)).size(), 8u);
  EXPECT_EQ(enumerate_oriented(SymplecticSpace(5, 1)).size(), 24u);
  EXPECT_EQ(enumerate_oriented(SymplecticSpace(3, 2)).size(), 80u);
  EXPECT_THROW(enumerate_lagrangians(SymplecticSpace(13, 1)), guard_exceeded);
}

TEST(Symplectic, LagrangiansMatchBruteForcePointSets) {
  for (auto [p, n] : {std::pair{3, 1}, {5, 1}, {7, 1}, {3, 2}}) {
    const SymplecticSpace sp(p, n);
    std::set<std::set<FpVector>> ours;
    for (const auto& l : enumerate_lagrangians(sp)) {
      const FpMatrix gram = l.basis() * sp.gram() * l.basis().transpose();
      EXPECT_EQ(gram, FpMatrix(p, n, n));
      EXPECT_EQ(rank(l.basis()), n);
      ours.insert(oracle::points_of(l, p));
    }
    EXPECT_EQ(ours, oracle::lagrangian_point_sets(p, n)) << "p=" << p << " n=" << n;
    EXPECT_EQ(static_cast<long long>(ours.size()), lagrangian_count_formula(p, n));
  }
}

TEST(Symplectic, WedgePairingExamples) {
  const SymplecticSpace sp(3, 1);
  const OrientedLagrangian l{line(sp, 1, 0), 1}, m{line(sp, 0, 1), 1};
  EXPECT_EQ(wedge_pairing(sp, l, m).value, 1);
  EXPECT_EQ(wedge_pairing(sp, l, l).value, 0);
  EXPECT_EQ(wedge_pairing(sp, l, {m.lagrangian, 2}).value, 2);
}

TEST(Symplectic, WedgePairingVanishesExactlyOffTransversality) {
  for (auto [p, n] : {std::pair{3, 1}, {5, 1}, {3, 2}}) {
    const SymplecticSpace sp(p, n);
    const auto lags = enumerate_lagrangians(sp);
    for (const auto& a : lags)
      for (const auto& b : lags) {
        const auto pa = oracle::points_of(a, p), pb = oracle::points_of(b, p);
        std::set<FpVector> meet;
        std::set_intersection(pa.begin(), pa.end(), pb.begin(), pb.end(), std::inserter(meet, meet.begin()));
        const bool trans = meet.size() == 1;
        EXPECT_EQ(wedge_pairing(sp, {a, 1}, {b, 1}).value != 0, trans);
        for (int c = 1; c < p; ++c)
          EXPECT_EQ(wedge_pairing(sp, {a, c}, {b, 1}).value, mod(static_cast<long long>(c) * wedge_pairing(sp, {a, 1}, {b, 1}).value, p));
      }
  }
}

TEST(Symplectic, VolumePairingIsTheLiouvilleVolume) {
  // omega^n / n! evaluated on (b_1, ..., b_n, b'_1, ..., b'_n) is (-1)^{n(n-1)/2} det of the stacked coordinates.
  for (auto [p, n] : {std::pair{3, 1}, {5, 1}, {3, 2}}) {
    const SymplecticSpace sp(p, n);
    const auto ol = enumerate_oriented(sp);
    for (size_t i = 0; i < ol.size(); i += (n == 2 ? 3 : 1))
      for (size_t j = 0; j < ol.size(); j += (n == 2 ? 5 : 1)) {
        FpMatrix stack(p, 2 * n, 2 * n);
        for (int r = 0; r < n; ++r)
          for (int c = 0; c < 2 * n; ++c) {
            stack.set(r, c, r == 0 ? ol[i].lagrangian.basis().at(r, c) * ol[i].orient % p : ol[i].lagrangian.basis().at(r, c));
            stack.set(n + r, c, ol[j].lagrangian.basis().at(r, c));
          }
        const long long sign = (n * (n - 1) / 2) % 2 ? -1 : 1;
        const long long want = sign * oracle::det_leibniz(stack) * ol[j].orient;
        EXPECT_EQ(volume_pairing(sp, ol[i], ol[j]).value, mod(want, p));
      }
  }
}

TEST(Symplectic, GroupOrders) {
  EXPECT_EQ(sp_enumerate(SymplecticSpace(3, 1)).size(), 24u);
  EXPECT_EQ(sp_enumerate(SymplecticSpace(5, 1)).size(), 120u);
  EXPECT_EQ(sp_enumerate(SymplecticSpace(3, 2)).size(), 51840u);
  EXPECT_EQ(sp_order_formula(3, 2), 51840);
  EXPECT_THROW(sp_enumerate(SymplecticSpace(5, 2)), guard_exceeded);
}

TEST(Symplectic, SpTwoIsSlTwoByBruteForce) {
  for (int p : {3, 5}) {
    const SymplecticSpace sp(p, 1);
    std::set<std::vector<int>> sl2;
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b)
        for (int c = 0; c < p; ++c)
          for (int d = 0; d < p; ++d)
            if (mod(a * d - b * c, p) == 1) sl2.insert({a, b, c, d});
    std::set<std::vector<int>> ours;
    for (const auto& g : sp_enumerate(sp)) ours.insert(g.matrix().entries());
    EXPECT_EQ(ours, sl2);
  }
}

TEST(Symplectic, CheckedRejectsWithEntry) {
  const SymplecticSpace sp(3, 1);
  EXPECT_NO_THROW(SpElement::checked(sp, FpMatrix::identity(3, 2)));
  try {
    SpElement::checked(sp, FpMatrix(3, {{1, 0}, {0, 2}}));
    FAIL() << "accepted a non-symplectic matrix";
  } catch (const not_symplectic& e) {
    EXPECT_EQ(e.row(), 0);
    EXPECT_EQ(e.col(), 1);
  }
}

TEST(Symplectic, GeneratorsAndRandomElementsAreSymplectic) {
  for (auto [p, n] : {std::pair{3, 1}, {3, 2}, {5, 2}}) {
    const SymplecticSpace sp(p, n);
    for (const auto& g : sp_generators(sp)) EXPECT_NO_THROW(SpElement::checked(sp, g.matrix()));
    const auto a = sp_random(sp, 42, 10);
    EXPECT_EQ(a, sp_random(sp, 42, 10));
    EXPECT_NE(a, sp_random(sp, 43, 10));
    for (const auto& g : a) EXPECT_NO_THROW(SpElement::checked(sp, g.matrix()));
  }
}

TEST(Symplectic, ActOnOlagExamples) {
  const SymplecticSpace sp(3, 1);
  const OrientedLagrangian l{line(sp, 1, 0), 1};
  EXPECT_EQ(act_on_olag(sp, SpElement::identity(sp), l), l);
  const SpElement g = SpElement::checked(sp, FpMatrix(3, {{0, 2}, {1, 0}}));
  const OrientedLagrangian expected{line(sp, 0, 1), 1};
  EXPECT_EQ(act_on_olag(sp, g, l), expected);
}

TEST(Symplectic, ActOnOlagIsAGroupAction) {
  const SymplecticSpace s31(3, 1);
  const auto group = sp_enumerate(s31);
  const auto ol = enumerate_oriented(s31);
  for (const auto& g : group)
    for (const auto& h : group)
      for (const auto& lo : ol) EXPECT_EQ(act_on_olag(s31, g * h, lo), act_on_olag(s31, g, act_on_olag(s31, h, lo)));
  const SymplecticSpace s32(3, 2);
  const auto gs = sp_random(s32, 5, 40);
  const auto ol2 = enumerate_oriented(s32);
  for (int i = 0; i + 1 < 40; i += 2)
    for (size_t k = 0; k < ol2.size(); k += 7) {
      EXPECT_EQ(act_on_olag(s32, gs[i] * gs[i + 1], ol2[k]), act_on_olag(s32, gs[i], act_on_olag(s32, gs[i + 1], ol2[k])));
      EXPECT_EQ(act_on_olag(s32, SpElement::identity(s32), ol2[k]), ol2[k]);
    }
}

TEST(Symplectic, OrientationFollowsTopWedge) {
  // g . (L, c) carries o_L = c b_1 ^ ... ^ b_n to c (g b_1) ^ ... ^ (g b_n); compare through the wedge pairing with a fixed M.
  const SymplecticSpace sp(3, 2);
  const auto gs = sp_random(sp, 9, 20);
  const auto ol = enumerate_oriented(sp);
  for (const auto& g : gs)
    for (size_t i = 0; i < ol.size(); i += 5)
      for (size_t j = 0; j < ol.size(); j += 9)
        EXPECT_EQ(wedge_pairing(sp, act_on_olag(sp, g, ol[i]), act_on_olag(sp, g, ol[j])).value, wedge_pairing(sp, ol[i], ol[j]).value);
}

TEST(Symplectic, CayleyExamples) {
  const SymplecticSpace sp(3, 1);
  EXPECT_EQ(cayley(sp, SpElement::checked(sp, FpMatrix(3, {{2, 0}, {0, 2}}))), FpMatrix(3, 2, 2));
  EXPECT_EQ(cayley(sp, SpElement::checked(sp, FpMatrix(3, {{0, 2}, {1, 0}}))), FpMatrix(3, {{0, 1}, {2, 0}}));
  EXPECT_THROW(cayley(sp, SpElement::identity(sp)), non_generic_element);
}

TEST(Symplectic, CayleyFormIsSymmetric) {
  const SymplecticSpace s31(3, 1);
  auto check = [](const SymplecticSpace& sp, const SpElement& g) {
    if (det(g.matrix() - FpMatrix::identity(sp.prime(), sp.dim())).value == 0) return;
    const FpMatrix k = cayley(sp, g);
    for (int u = 0; u < sp.vector_count(); ++u)
      for (int v = 0; v < sp.vector_count(); ++v)
        ASSERT_EQ(sp.omega(k.apply(sp.vec(u)), sp.vec(v)), sp.omega(k.apply(sp.vec(v)), sp.vec(u)));
  };
  for (const auto& g : sp_enumerate(s31)) check(s31, g);
  const SymplecticSpace s32(3, 2);
  for (const auto& g : sp_random(s32, 3, 15)) check(s32, g);
}

TEST(Symplectic, JsonShapes) {
  const SymplecticSpace sp(3, 1);
  const OrientedLagrangian l{line(sp, 1, 2), 2};
  EXPECT_EQ(to_json(l), nlohmann::json::parse(R"({"rows":[[1,2]],"orient":2})"));
  EXPECT_EQ(to_json(SpElement::identity(sp)), nlohmann::json::parse("[1,0,0,1]"));
}
