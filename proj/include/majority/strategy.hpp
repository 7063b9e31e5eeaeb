#pragma once

// Algorithms in the equality-comparison model. A strategy is a pure function
// of its own query history: it either asks the next pair or claims a position.

#include <majority/model.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace majority {

struct Claim {
  int position = 0;
  bool operator==(const Claim&) const = default;
};

using Move = std::variant<PositionPair, Claim>;

class Strategy {
 public:
  explicit Strategy(int n) : n_(n) { require_n(n); }
  virtual ~Strategy() = default;

  int n() const { return n_; }
  virtual std::string name() const = 0;
  virtual Move next(std::span<const QueryRecord> history) const = 0;

  /// Best claim available right now, used when the arena cuts a game short.
  /// Any "equal" answer identifies a majority position; otherwise the least
  /// position common to every consistent instance; otherwise a guess from the
  /// first consistent majority set.
  virtual int output_now(std::span<const QueryRecord> history) const {
    for (const auto& r : history)
      if (r.answer == Answer::equal) return std::min(r.i, r.j);
    KnowledgeState k(n_);
    try {
      for (const auto& r : history) k.apply(r);
    } catch (const Contradiction&) {
      return 0;
    }
    for (int p = 0; p < 2 * n_; ++p)
      if (is_safe_output(k, p)) return p;
    if (auto s = first_feasible_majority_set(k)) return s->positions().front();
    return 0;
  }

 private:
  int n_;
};

namespace detail {

inline std::optional<int> first_equal(std::span<const QueryRecord> history) {
  for (const auto& r : history)
    if (r.answer == Answer::equal) return std::min(r.i, r.j);
  return std::nullopt;
}

inline void expect_query(std::span<const QueryRecord> history, std::size_t at, int i, int j) {
  if (history[at].pair() != PositionPair::of(i, j)) throw std::invalid_argument("history does not match the strategy's queries");
}

}  // namespace detail

/// Pairs (0,1),(2,3),... then position 0 against positions 2 and 3. At most
/// n+2 comparisons.
class OptimalStrategy final : public Strategy {
 public:
  using Strategy::Strategy;
  std::string name() const override { return "optimal"; }

  Move next(std::span<const QueryRecord> history) const override {
    const std::size_t pairs = static_cast<std::size_t>(n());
    for (std::size_t k = 0; k < history.size() && k < pairs; ++k) {
      detail::expect_query(history, k, static_cast<int>(2 * k), static_cast<int>(2 * k + 1));
      if (history[k].answer == Answer::equal) return Claim{static_cast<int>(2 * k)};
    }
    const std::size_t k = history.size();
    if (k < pairs) return PositionPair{static_cast<int>(2 * k), static_cast<int>(2 * k + 1)};
    if (k == pairs) return PositionPair{0, 2};
    detail::expect_query(history, pairs, 0, 2);
    if (history[pairs].answer == Answer::equal) return Claim{0};
    if (k == pairs + 1) return PositionPair{0, 3};
    detail::expect_query(history, pairs + 1, 0, 3);
    return Claim{history[pairs + 1].answer == Answer::equal ? 0 : 1};
  }
};

/// Position 0,1,2 pairwise; if all differ at most one of them is in the
/// majority, so pairing (3,4),(5,6),... leaves position 2n-1 as the answer
/// when every pair differs. At most n+1 comparisons.
class TriangleStrategy final : public Strategy {
 public:
  using Strategy::Strategy;
  std::string name() const override { return "triangle"; }

  Move next(std::span<const QueryRecord> history) const override {
    const auto script = queries();
    for (std::size_t k = 0; k < history.size(); ++k) {
      if (k >= script.size()) throw std::invalid_argument("history does not match the strategy's queries");
      detail::expect_query(history, k, script[k].i, script[k].j);
      if (history[k].answer == Answer::equal) return Claim{script[k].i};
    }
    if (history.size() < script.size()) return script[history.size()];
    return Claim{2 * n() - 1};
  }

 private:
  std::vector<PositionPair> queries() const {
    std::vector<PositionPair> q{{0, 1}, {1, 2}, {0, 2}};
    for (int p = 3; p + 1 < 2 * n() - 1; p += 2) q.push_back({p, p + 1});
    return q;
  }
};

/// Every unordered pair in lexicographic order until one is equal.
class AllPairsStrategy final : public Strategy {
 public:
  using Strategy::Strategy;
  std::string name() const override { return "all-pairs"; }

  Move next(std::span<const QueryRecord> history) const override {
    if (auto p = detail::first_equal(history)) return Claim{*p};
    std::set<PositionPair> asked;
    for (const auto& r : history) asked.insert(r.pair());
    for (int i = 0; i < 2 * n(); ++i)
      for (int j = i + 1; j < 2 * n(); ++j)
        if (!asked.contains({i, j})) return PositionPair{i, j};
    return Claim{output_now(history)};
  }
};

/// Uniform random pairs of distinct positions from a seeded generator; after
/// `cap` fruitless draws it finishes with the unasked pairs in order.
class RandomizedPairsStrategy final : public Strategy {
 public:
  RandomizedPairsStrategy(int n, std::uint64_t seed, std::size_t cap) : Strategy(n), seed_(seed), cap_(cap) {
    if (cap == 0) throw std::invalid_argument("cap must be at least 1");
  }

  std::string name() const override { return "random"; }
  std::uint64_t seed() const { return seed_; }
  std::size_t cap() const { return cap_; }

  Move next(std::span<const QueryRecord> history) const override {
    if (auto p = detail::first_equal(history)) return Claim{*p};
    if (history.size() < cap_) return draw(history.size());
    std::set<PositionPair> asked;
    for (const auto& r : history) asked.insert(r.pair());
    for (int i = 0; i < 2 * n(); ++i)
      for (int j = i + 1; j < 2 * n(); ++j)
        if (!asked.contains({i, j})) return PositionPair{i, j};
    return Claim{output_now(history)};
  }

  /// The k-th random pair of this seed's sequence.
  PositionPair draw(std::size_t k) const {
    std::mt19937_64 rng(seed_);
    PositionPair p;
    for (std::size_t d = 0; d <= k; ++d) {
      int a = 0;
      int b = 0;
      do {
        a = bounded(rng, 2 * n());
        b = bounded(rng, 2 * n());
      } while (a == b);
      p = PositionPair::of(a, b);
    }
    return p;
  }

 private:
  static int bounded(std::mt19937_64& rng, int range) {
    return static_cast<int>((static_cast<unsigned __int128>(rng()) * static_cast<unsigned>(range)) >> 64);
  }

  std::uint64_t seed_;
  std::size_t cap_;
};

/// Plays a fixed list of queries, then claims `output` (or its best guess).
class ScriptedStrategy final : public Strategy {
 public:
  ScriptedStrategy(int n, std::vector<PositionPair> queries, std::optional<int> output = {})
      : Strategy(n), queries_(std::move(queries)), output_(output) {}

  std::string name() const override { return "scripted"; }

  Move next(std::span<const QueryRecord> history) const override {
    if (history.size() < queries_.size()) return queries_[history.size()];
    return Claim{output_now(history)};
  }

  int output_now(std::span<const QueryRecord> history) const override {
    return output_ ? *output_ : Strategy::output_now(history);
  }

 private:
  std::vector<PositionPair> queries_;
  std::optional<int> output_;
};

/// Claims a fixed position without asking anything.
class ConstantStrategy final : public Strategy {
 public:
  ConstantStrategy(int n, int position) : Strategy(n), position_(position) {}
  std::string name() const override { return "constant"; }
  Move next(std::span<const QueryRecord>) const override { return Claim{position_}; }
  int output_now(std::span<const QueryRecord>) const override { return position_; }

 private:
  int position_;
};

struct StrategyOptions {
  std::uint64_t seed = 0;
  std::size_t cap = 64;
};

inline std::unique_ptr<Strategy> optimal_strategy(int n) { return std::make_unique<OptimalStrategy>(n); }
inline std::unique_ptr<Strategy> all_pairs_strategy(int n) { return std::make_unique<AllPairsStrategy>(n); }
inline std::unique_ptr<Strategy> randomized_pairs_strategy(int n, std::uint64_t seed, std::size_t cap) {
  return std::make_unique<RandomizedPairsStrategy>(n, seed, cap);
}

/// Strategy by name: "optimal", "triangle", "all-pairs" or "random".
inline std::unique_ptr<Strategy> make_strategy(std::string_view name, int n, const StrategyOptions& opts = {}) {
  if (name == "optimal") return optimal_strategy(n);
  if (name == "triangle") return std::make_unique<TriangleStrategy>(n);
  if (name == "all-pairs") return all_pairs_strategy(n);
  if (name == "random") return randomized_pairs_strategy(n, opts.seed, opts.cap);
  throw std::invalid_argument("unknown strategy: " + std::string(name));
}

}  // namespace majority
