#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cyclotomic.hpp"

namespace canonweil {

/// Dense row-major matrix over Q(zeta_p).
class CycMatrix {
 public:
  CycMatrix() = default;
  CycMatrix(int p, int rows, int cols) : p_(p), rows_(rows), cols_(cols), entries_(static_cast<size_t>(rows) * cols, CycNum(p)) {}

  static CycMatrix identity(int p, int size) {
    CycMatrix m(p, size, size);
    for (int i = 0; i < size; ++i) m.at(i, i) = CycNum::one(p);
    return m;
  }

  int prime() const { return p_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  CycNum& at(int r, int c) { return entries_[static_cast<size_t>(r) * cols_ + c]; }
  const CycNum& at(int r, int c) const { return entries_[static_cast<size_t>(r) * cols_ + c]; }

  CycMatrix operator*(const CycMatrix& o) const {
    if (cols_ != o.rows_ || p_ != o.p_) throw std::invalid_argument("CycMatrix: incompatible product");
    CycMatrix m(p_, rows_, o.cols_);
    for (int r = 0; r < rows_; ++r)
      for (int k = 0; k < cols_; ++k) {
        const CycNum& a = at(r, k);
        if (a.is_zero()) continue;
        for (int c = 0; c < o.cols_; ++c) {
          const CycNum& b = o.at(k, c);
          if (!b.is_zero()) m.at(r, c) += a * b;
        }
      }
    return m;
  }

  CycMatrix operator+(const CycMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || p_ != o.p_) throw std::invalid_argument("CycMatrix: shape mismatch");
    CycMatrix m = *this;
    for (size_t i = 0; i < entries_.size(); ++i) m.entries_[i] += o.entries_[i];
    return m;
  }

  CycMatrix scaled(const CycNum& s) const {
    CycMatrix m = *this;
    for (auto& e : m.entries_)
      if (!e.is_zero()) e = e * s;
    return m;
  }

  CycNum trace() const {
    CycNum t(p_);
    for (int i = 0; i < std::min(rows_, cols_); ++i) t += at(i, i);
    return t;
  }

  bool is_zero() const {
    for (const auto& e : entries_)
      if (!e.is_zero()) return false;
    return true;
  }

  friend bool operator==(const CycMatrix&, const CycMatrix&) = default;

 private:
  int p_ = 0;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<CycNum> entries_;
};

inline nlohmann::json to_json(const CycMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(to_json(m.at(r, c)));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace canonweil
