#pragma once

/**
 * @file cyclotomic.hpp
 * @brief Exact arithmetic in the cyclotomic field Q(zeta_p), p an odd prime.
 *
 * An element is stored in the power basis 1, zeta, ..., zeta^{p-2} as integer
 * numerators over one common positive denominator, kept reduced so that two
 * elements are equal exactly when their stored data are equal. Coefficients
 * are unbounded (GMP), so powers such as (G/p)^n never overflow.
 *
 * Reduction modulo the cyclotomic polynomial uses
 *   zeta^{p-1} = -(1 + zeta + ... + zeta^{p-2}).
 *
 * The additive character psi(z) = zeta^z, the Legendre symbol sigma and the
 * quadratic Gauss sum G = sum_z psi(z^2 / 2) are defined at the bottom.
 */

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "field_elimination.hpp"
#include "fp_linear.hpp"

namespace canonweil {

using Rat = mpq_class;

inline Rat make_rat(long long num, long long den) {
  if (den == 0) throw std::domain_error("make_rat: zero denominator");
  Rat r(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
  r.canonicalize();
  return r;
}

class prime_mismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CycNum {
 public:
  /// Unbound element (no prime yet); only useful as a placeholder in containers.
  CycNum() = default;

  /// Zero of Q(zeta_p).
  explicit CycNum(int p) : p_(p), num_(static_cast<size_t>(p - 1)), den_(1) {
    if (!is_odd_prime(p)) throw std::invalid_argument("CycNum: p must be an odd prime, got " + std::to_string(p));
  }

  static CycNum rational(int p, const Rat& r) {
    CycNum c(p);
    c.num_[0] = r.get_num();
    c.den_ = r.get_den();
    return c;
  }
  static CycNum integer(int p, long long v) { return rational(p, Rat(static_cast<long>(v))); }
  static CycNum one(int p) { return integer(p, 1); }

  /// zeta^k for any integer k.
  static CycNum zeta_power(int p, long long k) { return one(p).times_zeta(k); }

  /// From power-basis coefficients c_0..c_{p-2}.
  static CycNum from_coeffs(int p, const std::vector<Rat>& coeffs) {
    if (static_cast<int>(coeffs.size()) != p - 1) throw std::invalid_argument("CycNum::from_coeffs: expected p-1 coefficients");
    CycNum c(p);
    mpz_class den = 1;
    for (const auto& q : coeffs) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
    for (int i = 0; i < p - 1; ++i) c.num_[i] = coeffs[i].get_num() * (den / coeffs[i].get_den());
    c.den_ = den;
    c.normalize();
    return c;
  }

  int prime() const { return p_; }
  bool bound() const { return p_ != 0; }

  Rat coeff(int i) const {
    Rat r(num_.at(static_cast<size_t>(i)), den_);
    r.canonicalize();
    return r;
  }
  std::vector<Rat> coeffs() const {
    std::vector<Rat> out;
    out.reserve(num_.size());
    for (int i = 0; i + 1 < p_; ++i) out.push_back(coeff(i));
    return out;
  }
  const std::vector<mpz_class>& numerators() const { return num_; }
  const mpz_class& denominator() const { return den_; }

  bool is_zero() const {
    return std::all_of(num_.begin(), num_.end(), [](const mpz_class& x) { return sgn(x) == 0; });
  }
  bool is_rational() const {
    return std::all_of(num_.begin() + (num_.empty() ? 0 : 1), num_.end(), [](const mpz_class& x) { return sgn(x) == 0; });
  }
  /// The rational value; only meaningful when is_rational().
  Rat rational_part() const { return coeff(0); }

  CycNum operator-() const {
    CycNum r = *this;
    for (auto& x : r.num_) x = -x;
    return r;
  }

  CycNum& operator+=(const CycNum& o) { return accumulate(o, 1); }
  CycNum& operator-=(const CycNum& o) { return accumulate(o, -1); }

  friend CycNum operator+(CycNum a, const CycNum& b) { return a += b; }
  friend CycNum operator-(CycNum a, const CycNum& b) { return a -= b; }

  friend CycNum operator*(const CycNum& a, const CycNum& b) {
    a.require_same(b);
    const int p = a.p_;
    if (a.is_zero() || b.is_zero()) return CycNum(p);
    // Multiply in Z[x]/(x^p - 1), then fold x^{p-1} back.
    std::vector<mpz_class> t(static_cast<size_t>(p));
    for (int i = 0; i < p - 1; ++i) {
      if (sgn(a.num_[i]) == 0) continue;
      for (int j = 0; j < p - 1; ++j) {
        if (sgn(b.num_[j]) == 0) continue;
        int k = i + j;
        if (k >= p) k -= p;
        mpz_addmul(t[k].get_mpz_t(), a.num_[i].get_mpz_t(), b.num_[j].get_mpz_t());
      }
    }
    CycNum r(p);
    for (int k = 0; k < p - 1; ++k) r.num_[k] = t[k] - t[p - 1];
    r.den_ = a.den_ * b.den_;
    r.normalize();
    return r;
  }
  CycNum& operator*=(const CycNum& o) { return *this = *this * o; }

  friend CycNum operator/(const CycNum& a, const CycNum& b) { return a * b.inverse(); }

  /// Multiplication by zeta^k: a cyclic shift in Z[x]/(x^p - 1).
  CycNum times_zeta(long long k) const {
    const int p = p_;
    const int s = mod(k, p);
    if (s == 0) return *this;
    std::vector<mpz_class> t(static_cast<size_t>(p));
    for (int i = 0; i < p - 1; ++i) t[(i + s) % p] = num_[i];
    CycNum r(p);
    for (int i = 0; i < p - 1; ++i) r.num_[i] = t[i] - t[p - 1];
    r.den_ = den_;
    return r;  // zeta is a unit of Z[zeta], so the content is unchanged
  }

  CycNum scaled(const Rat& q) const {
    if (sgn(q) == 0) return CycNum(p_);
    CycNum r = *this;
    for (auto& x : r.num_) x *= q.get_num();
    r.den_ *= q.get_den();
    r.normalize();
    return r;
  }

  /// The automorphism zeta -> zeta^{-1} (complex conjugation).
  CycNum conjugate() const {
    const int p = p_;
    std::vector<mpz_class> t(static_cast<size_t>(p));
    for (int i = 0; i < p - 1; ++i) t[(p - i) % p] = num_[i];
    CycNum r(p);
    for (int i = 0; i < p - 1; ++i) r.num_[i] = t[i] - t[p - 1];
    r.den_ = den_;
    r.normalize();
    return r;
  }

  /// Inverse by solving (multiplication-by-this) x = 1 over Q in the power basis.
  CycNum inverse() const {
    if (is_zero()) throw std::domain_error("CycNum: division by zero");
    const int d = p_ - 1;
    std::vector<std::vector<Rat>> m(static_cast<size_t>(d), std::vector<Rat>(static_cast<size_t>(d)));
    for (int j = 0; j < d; ++j) {
      const CycNum col = *this * zeta_power(p_, j);
      for (int i = 0; i < d; ++i) m[i][j] = col.coeff(i);
    }
    std::vector<Rat> rhs(static_cast<size_t>(d));
    rhs[0] = 1;
    auto x = solve_dense(std::move(m), std::move(rhs));
    if (!x) throw std::domain_error("CycNum: multiplication matrix singular for a nonzero element");
    return from_coeffs(p_, *x);
  }

  friend bool operator==(const CycNum& a, const CycNum& b) {
    if (a.p_ != b.p_) return false;
    return a.den_ == b.den_ && a.num_ == b.num_;
  }

  std::string to_string() const {
    std::string out;
    for (int i = 0; i < p_ - 1; ++i) {
      if (sgn(num_[i]) == 0) continue;
      Rat c = coeff(i);
      std::string term = c.get_str();
      if (i > 0) term = (c == 1 ? "" : c == -1 ? "-" : term + "*") + std::string(i == 1 ? "z" : "z^" + std::to_string(i));
      if (!out.empty() && term[0] != '-') out += "+";
      out += term;
    }
    return out.empty() ? "0" : out;
  }

 private:
  void require_same(const CycNum& o) const {
    if (p_ != o.p_) throw prime_mismatch("CycNum: operands live in different cyclotomic fields");
  }

  CycNum& accumulate(const CycNum& o, int sign) {
    require_same(o);
    if (den_ == o.den_) {
      for (size_t i = 0; i < num_.size(); ++i) sign > 0 ? num_[i] += o.num_[i] : num_[i] -= o.num_[i];
      if (den_ != 1) normalize();
      return *this;
    }
    for (size_t i = 0; i < num_.size(); ++i) {
      num_[i] *= o.den_;
      if (sign > 0)
        mpz_addmul(num_[i].get_mpz_t(), o.num_[i].get_mpz_t(), den_.get_mpz_t());
      else
        mpz_submul(num_[i].get_mpz_t(), o.num_[i].get_mpz_t(), den_.get_mpz_t());
    }
    den_ *= o.den_;
    normalize();
    return *this;
  }

  void normalize() {
    if (den_ == 1) return;
    mpz_class g = den_;
    for (const auto& x : num_) {
      if (g == 1) break;
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    }
    if (g != 1) {
      for (auto& x : num_) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
      mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
    }
  }

  int p_ = 0;
  std::vector<mpz_class> num_;
  mpz_class den_ = 1;
};

inline bool is_zero(const CycNum& c) { return c.is_zero(); }

inline CycNum conjugate(const CycNum& a) { return a.conjugate(); }

/// The additive character z -> zeta^z on F_p.
inline CycNum psi(int p, long long z) { return CycNum::zeta_power(p, z); }

/// Legendre character of F_p^*; a must be nonzero mod p.
inline int sigma(int p, long long a) {
  const int r = mod(a, p);
  if (r == 0) throw std::domain_error("sigma: argument is 0, the quadratic character lives on F_p^*");
  return pow_mod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

/// G(psi) = sum_{z in F_p} psi(z^2 / 2).
inline CycNum gauss_sum(int p) {
  const long long h = half_mod(p);
  CycNum g(p);
  for (long long z = 0; z < p; ++z) g += psi(p, h * z % p * z);
  return g;
}

inline nlohmann::json mpz_to_json(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

inline nlohmann::json to_json(const CycNum& c) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& q : c.coeffs()) coeffs.push_back({mpz_to_json(q.get_num()), mpz_to_json(q.get_den())});
  return {{"p", c.prime()}, {"coeffs", coeffs}};
}

}  // namespace canonweil
