#pragma once

/**
 * @file symplectic.hpp
 * @brief The standard symplectic space F_p^{2n}, its Lagrangians and Sp(V).
 *
 * Coordinates are fixed once: omega(u, v) = u^T J v with
 * J = [[0, I_n], [-I_n, 0]]. A Lagrangian is stored by the RREF of any basis,
 * which makes equality structural and gives a reference wedge
 * b_1 ^ ... ^ b_n against which an orientation is a single nonzero scalar.
 *
 * Vectors of V are also addressed by an integer index: the base-p number
 * whose most significant digit is coordinate 0. Index order is therefore the
 * lexicographic order on coordinate tuples.
 */

#include <algorithm>
#include <cstdint>
#include <memory>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "fp_linear.hpp"

namespace canonweil {

class guard_exceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

class not_symplectic : public std::invalid_argument {
 public:
  not_symplectic(int row, int col, const std::string& what) : std::invalid_argument(what), row_(row), col_(col) {}
  int row() const { return row_; }
  int col() const { return col_; }

 private:
  int row_;
  int col_;
};

class non_generic_element : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline long long ipow(long long b, int e) {
  long long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

class SymplecticSpace {
 public:
  SymplecticSpace(int p, int n) : p_(p), n_(n), J_(p, 2 * n, 2 * n) {
    if (!is_odd_prime(p)) throw std::invalid_argument("SymplecticSpace: p must be an odd prime");
    if (n < 1) throw std::invalid_argument("SymplecticSpace: n must be positive");
    for (int i = 0; i < n; ++i) {
      J_.set(i, n + i, 1);
      J_.set(n + i, i, -1);
    }
    const long long count = ipow(p, 2 * n);
    if (count > 1000000) throw guard_exceeded("SymplecticSpace: p^{2n} too large for tabulation");
    vector_count_ = static_cast<int>(count);
    vectors_.reserve(static_cast<size_t>(vector_count_));
    for (int idx = 0; idx < vector_count_; ++idx) vectors_.push_back(decode_uncached(idx));
    if (vector_count_ > 4096) return;  // large spaces compute omega on demand
    omega_table_.resize(static_cast<size_t>(vector_count_) * vector_count_);
    for (int a = 0; a < vector_count_; ++a)
      for (int b = 0; b < vector_count_; ++b)
        omega_table_[static_cast<size_t>(a) * vector_count_ + b] = static_cast<std::uint8_t>(omega(vectors_[a], vectors_[b]));
  }

  int prime() const { return p_; }
  int n() const { return n_; }
  int dim() const { return 2 * n_; }
  const FpMatrix& gram() const { return J_; }

  int vector_count() const { return vector_count_; }
  /// |H| = p^{2n+1}.
  int heisenberg_order() const { return vector_count_ * p_; }

  const FpVector& vec(int idx) const { return vectors_[static_cast<size_t>(idx)]; }

  int index(const FpVector& v) const {
    if (static_cast<int>(v.size()) != dim()) throw dimension_error("SymplecticSpace::index: vector length mismatch");
    int idx = 0;
    for (int x : v) idx = idx * p_ + mod(x, p_);
    return idx;
  }

  int omega(const FpVector& u, const FpVector& v) const {
    if (static_cast<int>(u.size()) != dim() || static_cast<int>(v.size()) != dim())
      throw dimension_error("omega: vectors must have length 2n");
    long long acc = 0;
    for (int i = 0; i < n_; ++i) acc += static_cast<long long>(u[i]) * v[n_ + i] - static_cast<long long>(u[n_ + i]) * v[i];
    return mod(acc, p_);
  }
  int omega_idx(int a, int b) const {
    if (omega_table_.empty()) return omega(vectors_[a], vectors_[b]);
    return omega_table_[static_cast<size_t>(a) * vector_count_ + b];
  }

  int add_idx(int a, int b) const {
    FpVector s(static_cast<size_t>(dim()));
    for (int i = 0; i < dim(); ++i) s[i] = (vectors_[a][i] + vectors_[b][i]) % p_;
    return index(s);
  }
  int neg_idx(int a) const {
    FpVector s(static_cast<size_t>(dim()));
    for (int i = 0; i < dim(); ++i) s[i] = mod(-vectors_[a][i], p_);
    return index(s);
  }
  int sub_idx(int a, int b) const { return add_idx(a, neg_idx(b)); }

 private:
  FpVector decode_uncached(int idx) const {
    FpVector v(static_cast<size_t>(dim()));
    for (int i = dim() - 1; i >= 0; --i) {
      v[i] = idx % p_;
      idx /= p_;
    }
    return v;
  }

  int p_;
  int n_;
  FpMatrix J_;
  int vector_count_ = 0;
  std::vector<FpVector> vectors_;
  std::vector<std::uint8_t> omega_table_;
};

using SpacePtr = std::shared_ptr<const SymplecticSpace>;

inline SpacePtr make_space(int p, int n) { return std::make_shared<const SymplecticSpace>(p, n); }

/// A Lagrangian subspace, identified by its RREF basis (n x 2n).
class Lagrangian {
 public:
  Lagrangian() = default;

  /// Canonicalizes any spanning matrix; rejects non-Lagrangian input.
  static Lagrangian from_span(const SymplecticSpace& space, const FpMatrix& rows) {
    RrefResult red = rref(rows);
    if (red.rank != space.n()) throw std::invalid_argument("Lagrangian: span has rank " + std::to_string(red.rank) + ", expected n");
    FpMatrix basis(space.prime(), space.n(), space.dim());
    for (int r = 0; r < space.n(); ++r)
      for (int c = 0; c < space.dim(); ++c) basis.set(r, c, red.form.at(r, c));
    Lagrangian l;
    l.basis_ = basis;
    l.pivots_ = red.pivots;
    for (int i = 0; i < space.n(); ++i)
      for (int j = 0; j < space.n(); ++j)
        if (space.omega(basis.row(i), basis.row(j)) != 0) throw std::invalid_argument("Lagrangian: span is not isotropic");
    return l;
  }

  const FpMatrix& basis() const { return basis_; }
  const std::vector<int>& pivots() const { return pivots_; }
  int n() const { return basis_.rows(); }

  bool contains(const FpVector& v) const {
    // v lies in the span iff v equals its own pivot-coordinate combination of rows.
    FpVector w(v.size(), 0);
    for (int i = 0; i < n(); ++i)
      for (size_t c = 0; c < v.size(); ++c) w[c] = mod(w[c] + static_cast<long long>(v[pivots_[i]]) * basis_.at(i, static_cast<int>(c)), basis_.prime());
    return w == v;
  }

  friend bool operator==(const Lagrangian& a, const Lagrangian& b) { return a.basis_ == b.basis_; }
  friend auto operator<=>(const Lagrangian& a, const Lagrangian& b) { return a.basis_.entries() <=> b.basis_.entries(); }

 private:
  FpMatrix basis_;
  std::vector<int> pivots_;
};

struct OrientedLagrangian {
  Lagrangian lagrangian;
  int orient = 1;  // o_L = orient * (b_1 ^ ... ^ b_n), nonzero mod p

  friend bool operator==(const OrientedLagrangian&, const OrientedLagrangian&) = default;
  friend auto operator<=>(const OrientedLagrangian& a, const OrientedLagrangian& b) {
    if (auto c = a.lagrangian <=> b.lagrangian; c != 0) return c;
    return a.orient <=> b.orient;
  }
};

inline std::vector<Lagrangian> enumerate_lagrangians(const SymplecticSpace& space) {
  const int p = space.prime();
  const int n = space.n();
  const int d = space.dim();
  if (p > 11 || n > 2) throw guard_exceeded("enumerate_lagrangians: supported up to p <= 11, n <= 2");
  std::vector<Lagrangian> out;
  // Every RREF n x 2n matrix of rank n: choose pivot columns, then fill the
  // free entries (right of the row's pivot, outside pivot columns).
  std::vector<int> pivots(static_cast<size_t>(n));
  std::vector<bool> choose(static_cast<size_t>(d), false);
  std::fill(choose.begin(), choose.begin() + n, true);
  do {
    int k = 0;
    for (int c = 0; c < d; ++c)
      if (choose[c]) pivots[k++] = c;
    std::vector<std::pair<int, int>> free;
    for (int r = 0; r < n; ++r)
      for (int c = pivots[r] + 1; c < d; ++c)
        if (!choose[c]) free.emplace_back(r, c);
    const long long combos = ipow(p, static_cast<int>(free.size()));
    for (long long code = 0; code < combos; ++code) {
      FpMatrix m(p, n, d);
      for (int r = 0; r < n; ++r) m.set(r, pivots[r], 1);
      long long rest = code;
      for (const auto& [r, c] : free) {
        m.set(r, c, rest % p);
        rest /= p;
      }
      bool isotropic = true;
      for (int i = 0; i < n && isotropic; ++i)
        for (int j = i + 1; j < n && isotropic; ++j)
          if (space.omega(m.row(i), m.row(j)) != 0) isotropic = false;
      if (isotropic) out.push_back(Lagrangian::from_span(space, m));
    }
  } while (std::prev_permutation(choose.begin(), choose.end()));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<OrientedLagrangian> enumerate_oriented(const SymplecticSpace& space) {
  std::vector<OrientedLagrangian> out;
  for (const auto& l : enumerate_lagrangians(space))
    for (int c = 1; c < space.prime(); ++c) out.push_back({l, c});
  return out;
}

/// prod_{i=1..n} (p^i + 1).
inline long long lagrangian_count_formula(int p, int n) {
  long long r = 1;
  for (int i = 1; i <= n; ++i) r *= ipow(p, i) + 1;
  return r;
}

/// c_L c_M det[omega(b_i, b'_j)]; nonzero exactly when L + M = V.
inline FpScalar wedge_pairing(const SymplecticSpace& space, const OrientedLagrangian& l, const OrientedLagrangian& m) {
  const int n = space.n();
  const int p = space.prime();
  FpMatrix gram(p, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gram.set(i, j, space.omega(l.lagrangian.basis().row(i), m.lagrangian.basis().row(j)));
  return {p, static_cast<long long>(det(gram).value) * l.orient % p * m.orient};
}

/**
 * The same pairing read through the volume form omega^n / n!:
 * vol(b_1, ..., b_n, b'_1, ..., b'_n) = (-1)^{n(n-1)/2} det[omega(b_i, b'_j)].
 */
inline FpScalar volume_pairing(const SymplecticSpace& space, const OrientedLagrangian& l, const OrientedLagrangian& m) {
  const FpScalar w = wedge_pairing(space, l, m);
  const int n = space.n();
  return {w.p, (n * (n - 1) / 2) % 2 == 0 ? w.value : -static_cast<long long>(w.value)};
}

inline bool transverse(const SymplecticSpace& space, const Lagrangian& l, const Lagrangian& m) {
  return wedge_pairing(space, {l, 1}, {m, 1}).value != 0;
}

class SpElement {
 public:
  SpElement() = default;

  /// Validates g^T J g = J; throws not_symplectic naming the first bad entry.
  static SpElement checked(const SymplecticSpace& space, const FpMatrix& g) {
    if (g.rows() != space.dim() || g.cols() != space.dim() || g.prime() != space.prime())
      throw dimension_error("SpElement: matrix must be 2n x 2n over F_p");
    const FpMatrix lhs = g.transpose() * space.gram() * g;
    for (int r = 0; r < lhs.rows(); ++r)
      for (int c = 0; c < lhs.cols(); ++c)
        if (lhs.at(r, c) != space.gram().at(r, c))
          throw not_symplectic(r, c,
                               "matrix is not symplectic: (g^T J g)[" + std::to_string(r) + "][" + std::to_string(c) + "] = " +
                                   std::to_string(lhs.at(r, c)) + ", expected " + std::to_string(space.gram().at(r, c)));
    return SpElement(g);
  }

  static SpElement identity(const SymplecticSpace& space) { return SpElement(FpMatrix::identity(space.prime(), space.dim())); }

  const FpMatrix& matrix() const { return m_; }
  FpVector apply(const FpVector& v) const { return m_.apply(v); }

  SpElement operator*(const SpElement& o) const { return SpElement(m_ * o.m_); }
  SpElement inverse() const { return SpElement(canonweil::inverse(m_)); }

  friend bool operator==(const SpElement&, const SpElement&) = default;
  friend auto operator<=>(const SpElement& a, const SpElement& b) { return a.m_.entries() <=> b.m_.entries(); }

 private:
  explicit SpElement(FpMatrix m) : m_(std::move(m)) {}
  FpMatrix m_;
};

/// |Sp(2n, F_p)| = p^{n^2} prod_{i=1..n} (p^{2i} - 1).
inline long long sp_order_formula(int p, int n) {
  long long r = ipow(p, n * n);
  for (int i = 1; i <= n; ++i) r *= ipow(p, 2 * i) - 1;
  return r;
}

/// The transvection x -> x + omega(v, x) v.
inline SpElement transvection(const SymplecticSpace& space, const FpVector& v) {
  const int d = space.dim();
  FpMatrix m(space.prime(), d, d);
  for (int c = 0; c < d; ++c) {
    FpVector e(static_cast<size_t>(d), 0);
    e[c] = 1;
    const int w = space.omega(v, e);
    for (int r = 0; r < d; ++r) m.set(r, c, e[r] + static_cast<long long>(w) * v[r]);
  }
  return SpElement::checked(space, m);
}

/**
 * Symplectic transvections along e_i, f_i, e_i + f_j (all i, j),
 * e_i + e_j and f_i + f_j (i < j). For n = 1 these are the two elementary
 * unipotents, which generate SL(2, F_p).
 */
inline std::vector<SpElement> sp_generators(const SymplecticSpace& space) {
  const int n = space.n();
  const int d = space.dim();
  std::vector<FpVector> dirs;
  auto unit = [&](int i) {
    FpVector v(static_cast<size_t>(d), 0);
    v[i] = 1;
    return v;
  };
  auto sum = [&](int i, int j) {
    FpVector v = unit(i);
    v[j] = 1;
    return v;
  };
  for (int i = 0; i < n; ++i) {
    dirs.push_back(unit(i));
    dirs.push_back(unit(n + i));
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) dirs.push_back(sum(i, n + j));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      dirs.push_back(sum(i, j));
      dirs.push_back(sum(n + i, n + j));
    }
  std::vector<SpElement> gens;
  for (const auto& v : dirs) gens.push_back(transvection(space, v));
  return gens;
}

/// Length of the generator walk used for seeded random elements.
inline constexpr int kRandomWalkLength = 64;

/**
 * Deterministic pseudo-random elements: each is the product of
 * kRandomWalkLength generators, generator k chosen as rng() % |gens| with
 * std::mt19937_64 seeded by `seed`.
 */
inline std::vector<SpElement> sp_random(const SymplecticSpace& space, std::uint64_t seed, int count) {
  const auto gens = sp_generators(space);
  std::mt19937_64 rng(seed);
  std::vector<SpElement> out;
  out.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    SpElement g = SpElement::identity(space);
    for (int s = 0; s < kRandomWalkLength; ++s) g = g * gens[rng() % gens.size()];
    out.push_back(g);
  }
  return out;
}

/// The whole group by closure under the generators, sorted by entries.
inline std::vector<SpElement> sp_enumerate(const SymplecticSpace& space) {
  const long long order = sp_order_formula(space.prime(), space.n());
  if (order > 100000) throw guard_exceeded("sp_enumerate: |Sp| = " + std::to_string(order) + " exceeds 10^5");
  const auto gens = sp_generators(space);
  auto key = [&](const SpElement& g) {
    std::uint64_t k = 0;
    for (int x : g.matrix().entries()) k = k * static_cast<std::uint64_t>(space.prime()) + static_cast<std::uint64_t>(x);
    return k;
  };
  std::unordered_set<std::uint64_t> seen;
  std::vector<SpElement> all{SpElement::identity(space)};
  seen.insert(key(all[0]));
  for (size_t i = 0; i < all.size(); ++i)
    for (const auto& s : gens) {
      SpElement h = all[i] * s;
      if (seen.insert(key(h)).second) all.push_back(std::move(h));
    }
  std::sort(all.begin(), all.end());
  return all;
}

/// g . (L, c): image subspace re-canonicalized, orientation multiplied by det of g|_L in RREF coordinates.
inline OrientedLagrangian act_on_olag(const SymplecticSpace& space, const SpElement& g, const OrientedLagrangian& lo) {
  const FpMatrix images = lo.lagrangian.basis() * g.matrix().transpose();  // rows g b_i
  Lagrangian image = Lagrangian::from_span(space, images);
  const int n = space.n();
  // images = D * B'; B' has the identity in its pivot columns, so D is read off there.
  FpMatrix change(space.prime(), n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) change.set(i, j, images.at(i, image.pivots()[j]));
  const int d = det(change).value;
  return {std::move(image), mod(static_cast<long long>(lo.orient) * d, space.prime())};
}

/// (g + I)(g - I)^{-1}; throws non_generic_element when det(g - I) = 0.
inline FpMatrix cayley(const SymplecticSpace& space, const SpElement& g) {
  const FpMatrix id = FpMatrix::identity(space.prime(), space.dim());
  const FpMatrix minus = g.matrix() - id;
  if (det(minus).value == 0) throw non_generic_element("cayley: det(g - I) = 0, g is outside the generic locus");
  return (g.matrix() + id) * inverse(minus);
}

inline nlohmann::json to_json(const Lagrangian& l) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < l.basis().rows(); ++r) rows.push_back(l.basis().row(r));
  return rows;
}

inline nlohmann::json to_json(const OrientedLagrangian& lo) { return {{"rows", to_json(lo.lagrangian)}, {"orient", lo.orient}}; }

inline nlohmann::json to_json(const SpElement& g) { return g.matrix().entries(); }

}  // namespace canonweil
