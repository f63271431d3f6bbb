#pragma once

/**
 * @file fp_linear.hpp
 * @brief Dense linear algebra over the prime field F_p.
 *
 * Entries are stored as ints in 0..p-1. Everything here is sized for the
 * small symplectic spaces the rest of the library enumerates (dimension at
 * most a handful), so the algorithms are the schoolbook ones.
 */

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace canonweil {

class dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class singular_matrix : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline int mod(long long a, int p) {
  long long r = a % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

inline int pow_mod(long long base, long long e, int p) {
  long long result = 1;
  base = mod(base, p);
  while (e > 0) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<int>(result);
}

/// Inverse of a nonzero residue; p must be prime.
inline int inv_mod(long long a, int p) {
  int r = mod(a, p);
  if (r == 0) throw std::domain_error("inverse of 0 in F_" + std::to_string(p));
  return pow_mod(r, p - 2, p);
}

inline bool is_odd_prime(int p) {
  if (p < 3 || p % 2 == 0) return false;
  for (int d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

/// 1/2 in F_p, i.e. (p+1)/2.
inline int half_mod(int p) { return (p + 1) / 2; }
/// 1/4 in F_p.
inline int quarter_mod(int p) { return inv_mod(4, p); }

struct FpScalar {
  int p = 0;
  int value = 0;

  FpScalar() = default;
  FpScalar(int prime, long long v) : p(prime), value(mod(v, prime)) {}

  friend bool operator==(const FpScalar&, const FpScalar&) = default;
};

using FpVector = std::vector<int>;

class FpMatrix {
 public:
  FpMatrix() = default;
  FpMatrix(int p, int rows, int cols) : p_(p), rows_(rows), cols_(cols), entries_(static_cast<size_t>(rows) * cols, 0) {
    if (p < 2) throw std::invalid_argument("FpMatrix: modulus must be prime");
  }
  FpMatrix(int p, int rows, int cols, const std::vector<long long>& entries) : FpMatrix(p, rows, cols) {
    if (entries.size() != entries_.size()) throw dimension_error("FpMatrix: entry count does not match shape");
    for (size_t i = 0; i < entries.size(); ++i) entries_[i] = mod(entries[i], p);
  }
  FpMatrix(int p, std::initializer_list<std::initializer_list<long long>> rows) {
    p_ = p;
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != cols_) throw dimension_error("FpMatrix: ragged initializer");
      for (long long x : r) entries_.push_back(mod(x, p));
    }
  }

  static FpMatrix identity(int p, int size) {
    FpMatrix m(p, size, size);
    for (int i = 0; i < size; ++i) m.set(i, i, 1);
    return m;
  }

  static FpMatrix from_rows(int p, const std::vector<FpVector>& rows, int cols) {
    FpMatrix m(p, static_cast<int>(rows.size()), cols);
    for (int r = 0; r < m.rows_; ++r) {
      if (static_cast<int>(rows[r].size()) != cols) throw dimension_error("FpMatrix::from_rows: row length mismatch");
      for (int c = 0; c < cols; ++c) m.set(r, c, rows[r][c]);
    }
    return m;
  }

  int prime() const { return p_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  int at(int r, int c) const { return entries_[static_cast<size_t>(r) * cols_ + c]; }
  void set(int r, int c, long long v) { entries_[static_cast<size_t>(r) * cols_ + c] = mod(v, p_); }
  const std::vector<int>& entries() const { return entries_; }

  FpVector row(int r) const { return FpVector(entries_.begin() + static_cast<long>(r) * cols_, entries_.begin() + static_cast<long>(r + 1) * cols_); }

  FpMatrix transpose() const {
    FpMatrix t(p_, cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) t.set(c, r, at(r, c));
    return t;
  }

  FpMatrix operator+(const FpMatrix& o) const {
    require_same_shape(o);
    FpMatrix s(p_, rows_, cols_);
    for (size_t i = 0; i < entries_.size(); ++i) s.entries_[i] = (entries_[i] + o.entries_[i]) % p_;
    return s;
  }

  FpMatrix operator-(const FpMatrix& o) const {
    require_same_shape(o);
    FpMatrix s(p_, rows_, cols_);
    for (size_t i = 0; i < entries_.size(); ++i) s.entries_[i] = mod(entries_[i] - o.entries_[i], p_);
    return s;
  }

  FpMatrix operator*(const FpMatrix& o) const {
    if (p_ != o.p_) throw dimension_error("FpMatrix: prime mismatch");
    if (cols_ != o.rows_) throw dimension_error("FpMatrix: inner dimensions differ");
    FpMatrix m(p_, rows_, o.cols_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < o.cols_; ++c) {
        long long acc = 0;
        for (int k = 0; k < cols_; ++k) acc += static_cast<long long>(at(r, k)) * o.at(k, c);
        m.entries_[static_cast<size_t>(r) * m.cols_ + c] = mod(acc, p_);
      }
    return m;
  }

  FpMatrix scaled(long long s) const {
    FpMatrix m = *this;
    for (auto& e : m.entries_) e = mod(static_cast<long long>(e) * s, p_);
    return m;
  }

  FpVector apply(const FpVector& v) const {
    if (static_cast<int>(v.size()) != cols_) throw dimension_error("FpMatrix::apply: vector length mismatch");
    FpVector out(rows_, 0);
    for (int r = 0; r < rows_; ++r) {
      long long acc = 0;
      for (int c = 0; c < cols_; ++c) acc += static_cast<long long>(at(r, c)) * v[c];
      out[r] = mod(acc, p_);
    }
    return out;
  }

  friend bool operator==(const FpMatrix&, const FpMatrix&) = default;
  friend auto operator<=>(const FpMatrix& a, const FpMatrix& b) {
    if (auto c = a.rows_ <=> b.rows_; c != 0) return c;
    if (auto c = a.cols_ <=> b.cols_; c != 0) return c;
    return a.entries_ <=> b.entries_;
  }

 private:
  void require_same_shape(const FpMatrix& o) const {
    if (p_ != o.p_ || rows_ != o.rows_ || cols_ != o.cols_) throw dimension_error("FpMatrix: shape or prime mismatch");
  }

  int p_ = 0;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> entries_;
};

struct RrefResult {
  FpMatrix form;
  int rank = 0;
  std::vector<int> pivots;
};

inline RrefResult rref(const FpMatrix& a) {
  const int p = a.prime();
  FpMatrix m = a;
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int sel = -1;
    for (int r = row; r < m.rows(); ++r)
      if (m.at(r, col) != 0) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    if (sel != row)
      for (int c = 0; c < m.cols(); ++c) {
        int t = m.at(sel, c);
        m.set(sel, c, m.at(row, c));
        m.set(row, c, t);
      }
    const int scale = inv_mod(m.at(row, col), p);
    for (int c = 0; c < m.cols(); ++c) m.set(row, c, static_cast<long long>(m.at(row, c)) * scale);
    for (int r = 0; r < m.rows(); ++r) {
      if (r == row || m.at(r, col) == 0) continue;
      const long long f = m.at(r, col);
      for (int c = 0; c < m.cols(); ++c) m.set(r, c, m.at(r, c) - f * m.at(row, c));
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(m), static_cast<int>(pivots.size()), std::move(pivots)};
}

inline int rank(const FpMatrix& a) { return rref(a).rank; }

inline FpScalar det(const FpMatrix& a) {
  if (!a.is_square()) throw dimension_error("det: matrix is not square");
  const int p = a.prime();
  FpMatrix m = a;
  long long d = 1;
  const int n = m.rows();
  for (int col = 0; col < n; ++col) {
    int sel = -1;
    for (int r = col; r < n; ++r)
      if (m.at(r, col) != 0) {
        sel = r;
        break;
      }
    if (sel < 0) return {p, 0};
    if (sel != col) {
      for (int c = 0; c < n; ++c) {
        int t = m.at(sel, c);
        m.set(sel, c, m.at(col, c));
        m.set(col, c, t);
      }
      d = -d;
    }
    d = mod(d * m.at(col, col), p);
    const int inv = inv_mod(m.at(col, col), p);
    for (int r = col + 1; r < n; ++r) {
      if (m.at(r, col) == 0) continue;
      const long long f = static_cast<long long>(m.at(r, col)) * inv % p;
      for (int c = col; c < n; ++c) m.set(r, c, m.at(r, c) - f * m.at(col, c));
    }
  }
  return {p, d};
}

inline FpMatrix inverse(const FpMatrix& a) {
  if (!a.is_square()) throw dimension_error("inverse: matrix is not square");
  const int n = a.rows();
  FpMatrix aug(a.prime(), n, 2 * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) aug.set(r, c, a.at(r, c));
    aug.set(r, n + r, 1);
  }
  RrefResult red = rref(aug);
  if (red.rank < n || red.pivots[n - 1] != n - 1) throw singular_matrix("inverse: matrix is singular");
  FpMatrix inv(a.prime(), n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) inv.set(r, c, red.form.at(r, n + c));
  return inv;
}

/// Rows form a basis of {x : a x = 0}; free variables enumerated in increasing order.
inline FpMatrix kernel_basis(const FpMatrix& a) {
  const int p = a.prime();
  RrefResult red = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (int c : red.pivots) is_pivot[c] = true;
  std::vector<FpVector> basis;
  for (int free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    FpVector x(a.cols(), 0);
    x[free] = 1;
    for (int i = 0; i < red.rank; ++i) x[red.pivots[i]] = mod(-red.form.at(i, free), p);
    basis.push_back(std::move(x));
  }
  return FpMatrix::from_rows(p, basis, a.cols());
}

/// Some x with a x = b, or nullopt when the system is inconsistent.
inline std::optional<FpMatrix> solve(const FpMatrix& a, const FpMatrix& b) {
  if (a.prime() != b.prime()) throw dimension_error("solve: prime mismatch");
  if (a.rows() != b.rows()) throw dimension_error("solve: row counts differ");
  const int n = a.cols();
  const int k = b.cols();
  FpMatrix aug(a.prime(), a.rows(), n + k);
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < n; ++c) aug.set(r, c, a.at(r, c));
    for (int c = 0; c < k; ++c) aug.set(r, n + c, b.at(r, c));
  }
  RrefResult red = rref(aug);
  for (int c : red.pivots)
    if (c >= n) return std::nullopt;
  FpMatrix x(a.prime(), n, k);
  for (int i = 0; i < red.rank; ++i)
    for (int c = 0; c < k; ++c) x.set(red.pivots[i], c, red.form.at(i, n + c));
  return x;
}

inline nlohmann::json to_json(const FpMatrix& m) {
  return {{"p", m.prime()}, {"rows", m.rows()}, {"cols", m.cols()}, {"entries", m.entries()}};
}

}  // namespace canonweil
