#pragma once

// Independent brute-force references. Nothing here calls into the feasibility,
// cover or search code it is used to check; only plain value types are shared.

#include <majority/model.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using majority::Answer;
using majority::QueryRecord;

struct Edge {
  int a;
  int b;
};

inline int bits(std::uint64_t m) {
  int c = 0;
  while (m) {
    m &= m - 1;
    ++c;
  }
  return c;
}

inline std::vector<int> members(std::uint64_t m) {
  std::vector<int> out;
  for (int p = 0; p < 64; ++p)
    if (m >> p & 1) out.push_back(p);
  return out;
}

/// Does the majority set `s` (as a bitmask) explain every recorded answer?
inline bool explains(std::uint64_t s, const std::vector<QueryRecord>& records) {
  for (const auto& r : records) {
    const bool both = (s >> r.i & 1) && (s >> r.j & 1);
    if ((r.answer == Answer::equal) != both) return false;
  }
  return true;
}

/// All n-subsets of [0,2n) consistent with the records, sorted lexicographically.
inline std::vector<std::vector<int>> feasible_sets(int n, const std::vector<QueryRecord>& records) {
  std::vector<std::vector<int>> out;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << (2 * n)); ++s)
    if (bits(s) == n && explains(s, records)) out.push_back(members(s));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<int> safe_positions(int n, const std::vector<QueryRecord>& records) {
  const auto sets = feasible_sets(n, records);
  if (sets.empty()) return {};
  std::vector<int> out;
  for (int p = 0; p < 2 * n; ++p) {
    bool everywhere = true;
    for (const auto& s : sets)
      if (!std::binary_search(s.begin(), s.end(), p)) everywhere = false;
    if (everywhere) out.push_back(p);
  }
  return out;
}

/// Minimum vertex cover by trying every subset; lexicographically least on ties.
inline std::vector<int> min_cover(int vertices, const std::vector<Edge>& edges) {
  std::optional<std::vector<int>> best;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << vertices); ++c) {
    bool covers = true;
    for (const auto& e : edges)
      if (!(c >> e.a & 1) && !(c >> e.b & 1)) covers = false;
    if (!covers) continue;
    auto m = members(c);
    if (!best || m.size() < best->size() || (m.size() == best->size() && m < *best)) best = m;
  }
  return *best;
}

/// Every balanced split (as the side holding vertex 0) in which all edges cross.
inline std::vector<std::uint64_t> crossing_splits(int vertices, const std::vector<Edge>& edges) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << vertices); ++s) {
    if (bits(s) * 2 != vertices || !(s & 1)) continue;
    bool ok = true;
    for (const auto& e : edges)
      if (((s >> e.a) & 1) == ((s >> e.b) & 1)) ok = false;
    if (ok) out.push_back(s);
  }
  return out;
}

/// Is `subset` independent in the graph (a clique of the complement)?
inline bool independent(std::uint64_t subset, const std::vector<Edge>& edges) {
  for (const auto& e : edges)
    if ((subset >> e.a & 1) && (subset >> e.b & 1)) return false;
  return true;
}

/// Plain depth-limited minimax over raw answer lists: no memo, no symmetry,
/// no pruning of any query. Feasibility is recomputed from scratch. With
/// `not_equal_only` the opponent says "not equal" whenever that stays consistent.
class NaiveGame {
 public:
  explicit NaiveGame(int n, bool not_equal_only = false) : n_(n), not_equal_only_(not_equal_only) {}

  bool solvable(std::vector<QueryRecord>& history, int depth) {
    ++nodes;
    if (!safe_positions(n_, history).empty()) return true;
    if (depth == 0) return false;
    for (int i = 0; i < 2 * n_; ++i)
      for (int j = i + 1; j < 2 * n_; ++j)
        if (query_wins(history, i, j, depth)) return true;
    return false;
  }

  bool query_wins(std::vector<QueryRecord>& history, int i, int j, int depth) {
    bool any_legal = false;
    history.push_back({i, j, Answer::not_equal});
    const bool ne_legal = !feasible_sets(n_, history).empty();
    history.pop_back();
    for (Answer a : {Answer::equal, Answer::not_equal}) {
      if (not_equal_only_ && a == Answer::equal && ne_legal) continue;
      history.push_back({i, j, a});
      const bool legal = !feasible_sets(n_, history).empty();
      const bool ok = !legal || solvable(history, depth - 1);
      history.pop_back();
      if (legal) any_legal = true;
      if (!ok) return false;
    }
    return any_legal;
  }

  int value() {
    std::vector<QueryRecord> h;
    for (int d = 0;; ++d)
      if (solvable(h, d)) return d;
  }

  std::vector<std::pair<int, int>> optimal_first_moves() {
    const int v = value();
    std::vector<std::pair<int, int>> out;
    std::vector<QueryRecord> h;
    for (int i = 0; i < 2 * n_; ++i)
      for (int j = i + 1; j < 2 * n_; ++j)
        if (query_wins(h, i, j, v)) out.emplace_back(i, j);
    return out;
  }

  std::size_t nodes = 0;

 private:
  int n_;
  bool not_equal_only_;
};

/// Random answer lists that some instance explains: a hidden majority set
/// answers random pairs.
inline std::vector<QueryRecord> random_consistent_records(int n, std::mt19937_64& rng, int max_queries) {
  std::vector<int> perm(static_cast<std::size_t>(2 * n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uint64_t s = 0;
  for (int k = 0; k < n; ++k) s |= std::uint64_t{1} << perm[static_cast<std::size_t>(k)];
  std::uniform_int_distribution<int> count(0, max_queries);
  std::uniform_int_distribution<int> pos(0, 2 * n - 1);
  std::vector<QueryRecord> out;
  const int q = count(rng);
  while (static_cast<int>(out.size()) < q) {
    const int i = pos(rng);
    const int j = pos(rng);
    if (i == j) continue;
    const bool both = (s >> i & 1) && (s >> j & 1);
    out.push_back({i, j, both ? Answer::equal : Answer::not_equal});
  }
  return out;
}

/// Random answer lists with arbitrary answers; may be unrealizable.
inline std::vector<QueryRecord> random_records(int n, std::mt19937_64& rng, int max_queries) {
  std::uniform_int_distribution<int> count(0, max_queries);
  std::uniform_int_distribution<int> pos(0, 2 * n - 1);
  std::bernoulli_distribution eq(0.3);
  std::vector<QueryRecord> out;
  const int q = count(rng);
  while (static_cast<int>(out.size()) < q) {
    const int i = pos(rng);
    const int j = pos(rng);
    if (i == j) continue;
    out.push_back({i, j, eq(rng) ? Answer::equal : Answer::not_equal});
  }
  return out;
}

}  // namespace oracle
