#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace canonweil;

namespace {

CycNum random_cyc(std::mt19937_64& rng, int p) {
  std::vector<Rat> c;
  for (int i = 0; i < p - 1; ++i) c.push_back(make_rat(static_cast<long long>(rng() % 11) - 5, static_cast<long long>(rng() % 4) + 1));
  return CycNum::from_coeffs(p, c);
}

std::vector<Rat> rats(std::initializer_list<long long> xs) {
  std::vector<Rat> out;
  for (long long x : xs) out.emplace_back(static_cast<long>(x));
  return out;
}

}  // namespace

TEST(Cyclotomic, ZetaSquaredReducesModPhi3) {
  const CycNum z = psi(3, 1);
  EXPECT_EQ((z * z).coeffs(), rats({-1, -1}));
}

TEST(Cyclotomic, SelfDivisionIsOne) {
  const CycNum a = CycNum::one(5) + psi(5, 1);
  EXPECT_EQ(a / a, CycNum::one(5));
}

TEST(Cyclotomic, GaussSumSquaredAtThree) {
  const CycNum g = CycNum::from_coeffs(3, rats({-1, -2}));
  EXPECT_EQ(g * g, CycNum::integer(3, -3));
}

TEST(Cyclotomic, ConjugateExamples) {
  EXPECT_EQ(conjugate(psi(3, 1)).coeffs(), rats({-1, -1}));
  EXPECT_EQ(conjugate(CycNum::integer(3, 5)), CycNum::integer(3, 5));
  const CycNum g = gauss_sum(3);
  EXPECT_EQ(conjugate(g).coeffs(), rats({1, 2}));
  EXPECT_EQ(g * conjugate(g), CycNum::integer(3, 3));
}

TEST(Cyclotomic, PsiExamples) {
  EXPECT_EQ(psi(3, 0), CycNum::one(3));
  EXPECT_EQ(psi(3, 1).coeffs(), rats({0, 1}));
  EXPECT_EQ(psi(3, 2) * psi(3, 2), psi(3, 1));
}

TEST(Cyclotomic, SigmaExamples) {
  EXPECT_EQ(sigma(3, 1), 1);
  EXPECT_EQ(sigma(3, 2), -1);
  EXPECT_EQ(sigma(5, 4), 1);
  EXPECT_THROW(sigma(5, 0), std::domain_error);
  EXPECT_THROW(sigma(5, 10), std::domain_error);
}

TEST(Cyclotomic, GaussSumValues) {
  EXPECT_EQ(gauss_sum(3).coeffs(), rats({-1, -2}));
  EXPECT_EQ(gauss_sum(3) * gauss_sum(3), CycNum::integer(3, -3));
  EXPECT_EQ(gauss_sum(5) * gauss_sum(5), CycNum::integer(5, 5));
}

TEST(Cyclotomic, GaussSumMatchesPolynomialOracle) {
  for (int p : {3, 5, 7, 11, 13}) {
    const oracle::Poly g = oracle::gauss_poly(p);
    EXPECT_TRUE(oracle::same(g, gauss_sum(p))) << "p=" << p;
    EXPECT_TRUE(oracle::same(oracle::poly_mul(g, g), CycNum::integer(p, oracle::legendre(p, -1) * p))) << "p=" << p;
    EXPECT_EQ(gauss_sum(p) * gauss_sum(p), CycNum::integer(p, sigma(p, -1) * p));
    EXPECT_EQ(gauss_sum(p) * conjugate(gauss_sum(p)), CycNum::integer(p, p));
  }
}

TEST(Cyclotomic, ErrorsOnMismatchAndZeroDivision) {
  EXPECT_THROW(CycNum::one(3) + CycNum::one(5), prime_mismatch);
  EXPECT_THROW(CycNum::one(3) * CycNum::one(5), prime_mismatch);
  EXPECT_THROW(CycNum::one(3) / CycNum(3), std::domain_error);
  EXPECT_THROW(CycNum(4), std::invalid_argument);
  EXPECT_THROW(CycNum(2), std::invalid_argument);
}

TEST(Cyclotomic, RingAxiomsAgainstPolynomialOracle) {
  std::mt19937_64 rng(7);
  for (int p : {3, 5, 7}) {
    for (int trial = 0; trial < 60; ++trial) {
      const CycNum a = random_cyc(rng, p), b = random_cyc(rng, p), c = random_cyc(rng, p);
      EXPECT_TRUE(oracle::same(oracle::poly_mul(oracle::to_poly(a), oracle::to_poly(b)), a * b));
      EXPECT_TRUE(oracle::same(oracle::poly_add(oracle::to_poly(a), oracle::to_poly(b)), a + b));
      EXPECT_EQ(a * b, b * a);
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a * (b + c), a * b + a * c);
      EXPECT_EQ((a + b) - b, a);
      if (!b.is_zero()) {
        EXPECT_EQ((a * b) / b, a);
        EXPECT_EQ(b * b.inverse(), CycNum::one(p));
      }
      EXPECT_EQ(conjugate(conjugate(a)), a);
      EXPECT_EQ(conjugate(a * b), conjugate(a) * conjugate(b));
    }
  }
}

TEST(Cyclotomic, CanonicalFormIsStructural) {
  // zeta^{p-1} written through the relation must equal the reduced value.
  for (int p : {3, 5, 7}) {
    CycNum s(p);
    for (int i = 0; i < p - 1; ++i) s -= psi(p, i);
    EXPECT_EQ(s, psi(p, p - 1));
    EXPECT_EQ(psi(p, p), CycNum::one(p));
    const CycNum half = CycNum::rational(p, make_rat(2, 4));
    EXPECT_EQ(half.coeff(0), make_rat(1, 2));
  }
}

TEST(Cyclotomic, PsiAndSigmaProperties) {
  for (int p : {3, 5, 7, 11}) {
    for (int a = 0; a < p; ++a) {
      EXPECT_EQ(psi(p, a) == CycNum::one(p), a == 0);
      EXPECT_EQ(conjugate(psi(p, a)), psi(p, -a));
      for (int b = 0; b < p; ++b) EXPECT_EQ(psi(p, a + b), psi(p, a) * psi(p, b));
    }
    int total = 0;
    for (int a = 1; a < p; ++a) {
      total += sigma(p, a);
      EXPECT_EQ(sigma(p, a), oracle::legendre(p, a));
      for (int b = 1; b < p; ++b) EXPECT_EQ(sigma(p, a * b), sigma(p, a) * sigma(p, b));
    }
    EXPECT_EQ(total, 0);
  }
}

TEST(Cyclotomic, LargePowersStayExact) {
  const CycNum r = gauss_sum(11).scaled(Rat(1, 11));
  CycNum acc = CycNum::one(11);
  for (int i = 0; i < 40; ++i) acc *= r;
  // (G/p)^40 = (G^2)^20 / p^40 = (-11)^20 / 11^40.
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 11, 20);
  EXPECT_EQ(acc, CycNum::rational(11, Rat(mpz_class(1), den)));
}

TEST(Cyclotomic, JsonShape) {
  const auto j = to_json(CycNum::from_coeffs(3, {make_rat(1, 2), make_rat(-3, 6)}));
  EXPECT_EQ(j["p"], 3);
  EXPECT_EQ(j["coeffs"], nlohmann::json::parse("[[1,2],[-1,2]]"));
}
