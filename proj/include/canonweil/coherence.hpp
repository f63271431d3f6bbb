#pragma once

/**
 * @file coherence.hpp
 * @brief Bracketings of P (x) ... (x) P, associator moves, and the length
 * relations between parallel move sequences.
 *
 * Once every associator edge collapses to the same endomorphism C of P, two
 * directed paths of lengths a and b between the same bracketings give
 * C^a = C^b. With C invertible this is C^{|a-b|} = id, and the gcd of all
 * such differences decides the order of C.
 */

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "concurrency.hpp"
#include "symplectic.hpp"

namespace canonweil {

/// Full binary tree whose leaves are all the generator P.
class BracketTree {
 public:
  static BracketTree leaf() { return BracketTree(nullptr); }
  static BracketTree join(BracketTree left, BracketTree right);

  bool is_leaf() const { return node_ == nullptr; }
  const BracketTree& left() const;
  const BracketTree& right() const;

  int leaves() const { return is_leaf() ? 1 : left().leaves() + right().leaves(); }

  /// "P" for a leaf, "(A*B)" for a product.
  std::string to_string() const { return is_leaf() ? "P" : "(" + left().to_string() + "*" + right().to_string() + ")"; }

  friend bool operator==(const BracketTree& a, const BracketTree& b) {
    if (a.is_leaf() || b.is_leaf()) return a.is_leaf() == b.is_leaf();
    return a.node_ == b.node_ || (a.left() == b.left() && a.right() == b.right());
  }
  friend bool operator<(const BracketTree& a, const BracketTree& b) { return a.to_string() < b.to_string(); }

 private:
  struct Node;
  explicit BracketTree(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct BracketTree::Node {
  BracketTree left;
  BracketTree right;
};

inline BracketTree BracketTree::join(BracketTree left, BracketTree right) {
  return BracketTree(std::make_shared<const Node>(Node{std::move(left), std::move(right)}));
}
inline const BracketTree& BracketTree::left() const { return node_->left; }
inline const BracketTree& BracketTree::right() const { return node_->right; }

inline void check_leaf_guard(int n, int lo, int hi, const char* what) {
  if (n < lo || n > hi)
    throw guard_exceeded(std::string(what) + ": leaf count " + std::to_string(n) + " outside " + std::to_string(lo) + ".." +
                         std::to_string(hi));
}

/// All trees with n leaves; the left factor grows from 1 leaf to n - 1.
inline std::vector<BracketTree> enumerate_brackets(int n) {
  check_leaf_guard(n, 2, 7, "enumerate_brackets");
  std::vector<std::vector<BracketTree>> by_size(static_cast<size_t>(n) + 1);
  by_size[1] = {BracketTree::leaf()};
  for (int k = 2; k <= n; ++k)
    for (int a = 1; a < k; ++a)
      for (const auto& l : by_size[a])
        for (const auto& r : by_size[k - a]) by_size[k].push_back(BracketTree::join(l, r));
  return by_size[n];
}

inline std::uint64_t catalan(int m) {
  std::uint64_t c = 1;
  for (int i = 0; i < m; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

inline BracketTree left_comb(int n) {
  BracketTree t = BracketTree::leaf();
  for (int i = 1; i < n; ++i) t = BracketTree::join(t, BracketTree::leaf());
  return t;
}

inline BracketTree right_comb(int n) {
  BracketTree t = BracketTree::leaf();
  for (int i = 1; i < n; ++i) t = BracketTree::join(BracketTree::leaf(), t);
  return t;
}

/**
 * Every tree reached by one move (A*B)*C -> A*(B*C). The position is the
 * preorder index of the internal node where the move happens.
 */
inline std::vector<std::pair<BracketTree, int>> tamari_successors(const BracketTree& t) {
  int counter = 0;
  // Returns the rewritten trees of t's subtree together with their positions.
  auto walk = [&](auto&& self, const BracketTree& s) -> std::vector<std::pair<BracketTree, int>> {
    if (s.is_leaf()) return {};
    const int here = counter++;
    std::vector<std::pair<BracketTree, int>> res;
    if (!s.left().is_leaf())
      res.emplace_back(BracketTree::join(s.left().left(), BracketTree::join(s.left().right(), s.right())), here);
    for (auto& [l, pos] : self(self, s.left())) res.emplace_back(BracketTree::join(l, s.right()), pos);
    for (auto& [r, pos] : self(self, s.right())) res.emplace_back(BracketTree::join(s.left(), r), pos);
    return res;
  };
  auto out = walk(walk, t);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  return out;
}

/// True when `to` is obtained from `from` by exactly one associator move.
inline bool is_single_move(const BracketTree& from, const BracketTree& to) {
  for (const auto& [t, pos] : tamari_successors(from))
    if (t == to) return true;
  return false;
}

/// Number of directed paths to the right comb, keyed by path length.
using LengthCounts = std::map<int, std::uint64_t>;

namespace detail {

inline const LengthCounts& lengths_to_sink(const BracketTree& t, std::map<std::string, LengthCounts>& memo) {
  const std::string key = t.to_string();
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  LengthCounts counts;
  const auto next = tamari_successors(t);
  if (next.empty()) counts[0] = 1;
  for (const auto& [s, pos] : next)
    for (const auto& [len, c] : lengths_to_sink(s, memo)) counts[len + 1] += c;
  return memo.emplace(key, std::move(counts)).first->second;
}

}  // namespace detail

/// Path lengths (with multiplicities) from the left comb to the right comb; fans out over first moves.
inline LengthCounts comb_path_lengths(int n, unsigned workers = worker_count()) {
  check_leaf_guard(n, 2, 7, "comb_path_lengths");
  const auto first = tamari_successors(left_comb(n));
  if (first.empty()) return {{0, 1}};
  std::vector<LengthCounts> partial(first.size());
  parallel_for(
      first.size(),
      [&](size_t i) {
        std::map<std::string, LengthCounts> memo;
        partial[i] = detail::lengths_to_sink(first[i].first, memo);
      },
      workers);
  LengthCounts total;
  for (const auto& part : partial)
    for (const auto& [len, c] : part) total[len + 1] += c;
  return total;
}

inline std::set<std::pair<int, int>> relations_from_lengths(const LengthCounts& counts) {
  std::set<std::pair<int, int>> out;
  for (auto a = counts.begin(); a != counts.end(); ++a)
    for (auto b = std::next(a); b != counts.end(); ++b) out.emplace(a->first, b->first);
  return out;
}

/// Pairs (a, b), a < b, of distinct lengths of comb-to-comb paths.
inline std::set<std::pair<int, int>> parallel_relations(int n) {
  check_leaf_guard(n, 3, 7, "parallel_relations");
  return relations_from_lengths(comb_path_lengths(n));
}

struct Verdict {
  enum class Kind { identity, power, inconclusive };
  Kind kind = Kind::inconclusive;
  int order_bound = 0;  // d with C^d = id, when known

  std::string to_string() const {
    switch (kind) {
      case Kind::identity:
        return "C=id";
      case Kind::power:
        return "C^" + std::to_string(order_bound) + "=id";
      default:
        return "inconclusive";
    }
  }
};

inline Verdict conclude_idempotent(const std::set<std::pair<int, int>>& relations, bool invertible) {
  if (relations.empty() || !invertible) return {};
  int d = 0;
  for (const auto& [a, b] : relations) d = std::gcd(d, std::abs(b - a));
  if (d == 1) return {Verdict::Kind::identity, 1};
  return {Verdict::Kind::power, d};
}

struct CoherenceReport {
  int n = 0;
  std::uint64_t catalan_number = 0;
  LengthCounts lengths;
  std::set<std::pair<int, int>> relations;
  Verdict verdict;
};

inline CoherenceReport coherence_report(int n) {
  CoherenceReport r;
  r.n = n;
  r.catalan_number = catalan(n - 1);
  r.lengths = comb_path_lengths(n);
  r.relations = relations_from_lengths(r.lengths);
  r.verdict = conclude_idempotent(r.relations, true);
  return r;
}

inline nlohmann::json to_json(const CoherenceReport& r) {
  nlohmann::json lengths = nlohmann::json::array();
  for (const auto& [len, c] : r.lengths) lengths.push_back(len);
  nlohmann::json rel = nlohmann::json::array();
  for (const auto& [a, b] : r.relations) rel.push_back({a, b});
  return {{"n", r.n}, {"catalan", r.catalan_number}, {"path_lengths", lengths}, {"relations", rel}, {"verdict", r.verdict.to_string()}};
}

}  // namespace canonweil
