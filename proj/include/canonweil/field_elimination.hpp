#pragma once

// Gaussian elimination over an arbitrary exact field type.
//
// F must provide +, -, *, / and a free function `is_zero(const F&)`.
// Used with Rat (mpq_class) for cyclotomic inversion and with CycNum for
// the commutant and horizontality systems.

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace canonweil {

inline bool is_zero(const mpq_class& q) { return sgn(q) == 0; }

/// Solves a x = b for square, nonsingular a. Returns nullopt if a is singular.
template <class F>
std::optional<std::vector<F>> solve_dense(std::vector<std::vector<F>> a, std::vector<F> b) {
  const size_t n = a.size();
  if (b.size() != n) throw std::invalid_argument("solve_dense: right-hand side length mismatch");
  for (size_t col = 0; col < n; ++col) {
    size_t sel = n;
    for (size_t r = col; r < n; ++r)
      if (!is_zero(a[r][col])) {
        sel = r;
        break;
      }
    if (sel == n) return std::nullopt;
    std::swap(a[sel], a[col]);
    std::swap(b[sel], b[col]);
    const F pivot = a[col][col];
    for (size_t c = col; c < n; ++c) a[col][c] = a[col][c] / pivot;
    b[col] = b[col] / pivot;
    for (size_t r = 0; r < n; ++r) {
      if (r == col || is_zero(a[r][col])) continue;
      const F f = a[r][col];
      for (size_t c = col; c < n; ++c) a[r][c] = a[r][c] - f * a[col][c];
      b[r] = b[r] - f * b[col];
    }
  }
  return b;
}

/**
 * Row echelon basis grown one sparse row at a time.
 *
 * Each stored row is scaled so its leading entry is 1 and no two stored rows
 * share a leading column, so the number of stored rows is the rank of
 * everything added so far. Feeding rows whose leading columns are already
 * pivots keeps fill-in confined to the columns of those pivot rows.
 */
template <class F>
class IncrementalEliminator {
 public:
  using Row = std::map<int, F>;

  /// Returns true when the row was independent of the rows added before.
  bool add_row(Row row) {
    drop_zeros(row);
    auto it = row.begin();
    while (it != row.end()) {
      auto piv = pivots_.find(it->first);
      if (piv == pivots_.end()) {
        ++it;
        continue;
      }
      const int col = it->first;
      const F factor = it->second;
      for (const auto& [c, v] : piv->second) {
        auto [slot, inserted] = row.try_emplace(c, v);
        if (inserted)
          slot->second = -(factor * v);
        else
          slot->second = slot->second - factor * v;
      }
      drop_zeros(row);
      it = row.upper_bound(col);
    }
    if (row.empty()) return false;
    const int lead = row.begin()->first;
    const F inv_lead = row.begin()->second;
    for (auto& [c, v] : row) v = v / inv_lead;
    pivots_.emplace(lead, std::move(row));
    return true;
  }

  int rank() const { return static_cast<int>(pivots_.size()); }
  const std::map<int, Row>& pivot_rows() const { return pivots_; }

 private:
  static void drop_zeros(Row& row) {
    for (auto it = row.begin(); it != row.end();) {
      if (is_zero(it->second))
        it = row.erase(it);
      else
        ++it;
    }
  }

  std::map<int, Row> pivots_;
};

}  // namespace canonweil
