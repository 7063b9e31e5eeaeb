#pragma once

// Exact worst-case comparison complexity for small n: depth-limited minimax
// over the query game, memoised on knowledge states up to position relabeling.

#include <majority/model.hpp>
#include <majority/strategy.hpp>

#include <bitset>
#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace majority {

/// Encoding of a knowledge state that is identical for two states exactly
/// when a permutation of positions maps one onto the other.
struct CanonicalKey {
  std::string bytes;
  bool operator==(const CanonicalKey&) const = default;
  auto operator<=>(const CanonicalKey&) const = default;
};

struct CanonicalKeyHash {
  std::size_t operator()(const CanonicalKey& k) const { return std::hash<std::string>{}(k.bytes); }
};

namespace detail {

// Class-level quotient: one vertex per known-equal class coloured by its size,
// edges for class inequalities. Canonical form by colour refinement plus
// individualisation of the first non-trivial cell, minimised over branches.
class QuotientCanon {
 public:
  explicit QuotientCanon(const KnowledgeState& k) : n_(k.n()) {
    const auto reps = k.representatives();
    m_ = static_cast<int>(reps.size());
    std::vector<int> index(static_cast<std::size_t>(k.size()), -1);
    for (int v = 0; v < m_; ++v) index[static_cast<std::size_t>(reps[static_cast<std::size_t>(v)])] = v;
    sizes_.resize(static_cast<std::size_t>(m_));
    adj_.assign(static_cast<std::size_t>(m_), 0);
    for (int v = 0; v < m_; ++v) {
      const int r = reps[static_cast<std::size_t>(v)];
      sizes_[static_cast<std::size_t>(v)] = popcount(k.class_members(r));
      for_each_position(k.unequal_to(r), [&](int q) {
        if (k.representative(q) == q) adj_[static_cast<std::size_t>(v)] |= bit(index[static_cast<std::size_t>(q)]);
      });
    }
  }

  std::string run() {
    refine_and_search(refine(std::vector<int>(sizes_.begin(), sizes_.end())));
    return best_;
  }

 private:
  std::vector<int> refine(std::vector<int> colours) const {
    std::size_t distinct = 0;
    while (true) {
      std::vector<std::vector<int>> sig(static_cast<std::size_t>(m_));
      for (int v = 0; v < m_; ++v) {
        auto& s = sig[static_cast<std::size_t>(v)];
        s.push_back(colours[static_cast<std::size_t>(v)]);
        std::vector<int> nb;
        for_each_position(adj_[static_cast<std::size_t>(v)], [&](int w) { nb.push_back(colours[static_cast<std::size_t>(w)]); });
        std::sort(nb.begin(), nb.end());
        s.insert(s.end(), nb.begin(), nb.end());
      }
      auto sorted = sig;
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      for (int v = 0; v < m_; ++v)
        colours[static_cast<std::size_t>(v)] = static_cast<int>(
            std::lower_bound(sorted.begin(), sorted.end(), sig[static_cast<std::size_t>(v)]) - sorted.begin());
      if (sorted.size() == distinct) return colours;
      distinct = sorted.size();
    }
  }

  void refine_and_search(const std::vector<int>& colours) {
    // First colour shared by more than one vertex.
    std::vector<int> count(static_cast<std::size_t>(m_), 0);
    for (int c : colours) ++count[static_cast<std::size_t>(c)];
    int target = -1;
    for (int c = 0; c < m_ && target < 0; ++c)
      if (count[static_cast<std::size_t>(c)] > 1) target = c;
    if (target < 0) {
      leaf(colours);
      return;
    }
    std::vector<int> tried;
    for (int v = 0; v < m_; ++v) {
      if (colours[static_cast<std::size_t>(v)] != target) continue;
      // Same-coloured twins are swapped by an automorphism: one branch covers both.
      const bool twin = std::any_of(tried.begin(), tried.end(), [&](int u) {
        return (adj_[static_cast<std::size_t>(u)] & ~bit(v)) == (adj_[static_cast<std::size_t>(v)] & ~bit(u));
      });
      if (twin) continue;
      tried.push_back(v);
      std::vector<int> split(colours.size());
      for (int w = 0; w < m_; ++w) split[static_cast<std::size_t>(w)] = 2 * colours[static_cast<std::size_t>(w)] + (w == v ? 0 : 1);
      refine_and_search(refine(std::move(split)));
    }
  }

  void leaf(const std::vector<int>& colours) {
    std::vector<int> order(static_cast<std::size_t>(m_));
    for (int v = 0; v < m_; ++v) order[static_cast<std::size_t>(colours[static_cast<std::size_t>(v)])] = v;
    std::string code;
    code.push_back(static_cast<char>(n_));
    code.push_back(static_cast<char>(m_));
    for (int v : order) code.push_back(static_cast<char>(sizes_[static_cast<std::size_t>(v)]));
    unsigned char acc = 0;
    int bits = 0;
    for (int a = 0; a < m_; ++a)
      for (int b = a + 1; b < m_; ++b) {
        const bool edge = (adj_[static_cast<std::size_t>(order[static_cast<std::size_t>(a)])] & bit(order[static_cast<std::size_t>(b)])) != 0;
        acc = static_cast<unsigned char>((acc << 1) | (edge ? 1 : 0));
        if (++bits == 8) {
          code.push_back(static_cast<char>(acc));
          acc = 0;
          bits = 0;
        }
      }
    if (bits > 0) code.push_back(static_cast<char>(acc << (8 - bits)));
    if (best_.empty() || code < best_) best_ = std::move(code);
  }

  int n_;
  int m_ = 0;
  std::vector<int> sizes_;
  std::vector<PositionMask> adj_;
  std::string best_;
};

}  // namespace detail

inline CanonicalKey canonical_key(const KnowledgeState& k) { return {detail::QuotientCanon(k).run()}; }

/// Raised when the search exceeds its node budget; no partial value is given.
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Which answers the minimax opponent may give.
enum class AnswerRule {
  any,             // the worse of the two consistent answers
  not_equal_only,  // "not equal" whenever it is consistent
};

struct SearchOptions {
  std::size_t node_budget = 50'000'000;
  AnswerRule rule = AnswerRule::any;
};

struct GameValueReport {
  int n = 0;
  int value = 0;
  AnswerRule rule = AnswerRule::any;
  std::size_t nodes_expanded = 0;
  std::size_t table_size = 0;
  double elapsed_seconds = 0.0;
};

/// A query node with a child per consistent answer, or a leaf claiming a position.
struct DecisionNode {
  std::optional<int> output;
  PositionPair query;
  std::unique_ptr<DecisionNode> equal;
  std::unique_ptr<DecisionNode> not_equal;

  static std::unique_ptr<DecisionNode> leaf(int p) {
    auto node = std::make_unique<DecisionNode>();
    node->output = p;
    return node;
  }
};

struct DecisionTree {
  int n = 0;
  std::unique_ptr<DecisionNode> root;
};

inline int tree_depth(const DecisionNode* node) {
  if (node == nullptr || node->output) return 0;
  return 1 + std::max(tree_depth(node->equal.get()), tree_depth(node->not_equal.get()));
}

inline int tree_depth(const DecisionTree& t) { return tree_depth(t.root.get()); }

/// Walks the tree with the instance's answers and returns the claimed position
/// together with the number of comparisons; nullopt if it falls off the tree.
inline std::optional<std::pair<int, int>> run_tree(const DecisionTree& t, const Instance& inst) {
  const DecisionNode* node = t.root.get();
  int queries = 0;
  while (node != nullptr && !node->output) {
    const Answer a = oracle_answer(inst, node->query.i, node->query.j);
    node = a == Answer::equal ? node->equal.get() : node->not_equal.get();
    ++queries;
  }
  if (node == nullptr) return std::nullopt;
  return std::pair{*node->output, queries};
}

/// True iff every leaf claims a safe output of the knowledge along its path.
inline bool leaves_are_safe(const DecisionTree& t) {
  std::function<bool(const DecisionNode*, const KnowledgeState&)> walk = [&](const DecisionNode* node,
                                                                              const KnowledgeState& k) {
    if (node == nullptr) return true;
    if (node->output) return is_safe_output(k, *node->output);
    for (Answer a : {Answer::equal, Answer::not_equal}) {
      const DecisionNode* child = a == Answer::equal ? node->equal.get() : node->not_equal.get();
      if (child == nullptr) continue;
      try {
        if (!walk(child, apply_answer(k, {node->query.i, node->query.j, a}))) return false;
      } catch (const Contradiction&) {
        return false;
      }
    }
    return true;
  };
  return walk(t.root.get(), KnowledgeState(t.n));
}

/// The decision tree a strategy induces: a branch for every answer that keeps
/// some instance consistent.
inline DecisionTree strategy_tree(const Strategy& s) {
  std::function<std::unique_ptr<DecisionNode>(std::vector<QueryRecord>&, const KnowledgeState&)> build =
      [&](std::vector<QueryRecord>& history, const KnowledgeState& k) -> std::unique_ptr<DecisionNode> {
    const Move m = s.next(history);
    if (const auto* c = std::get_if<Claim>(&m)) return DecisionNode::leaf(c->position);
    if (history.size() > kMaxPositions * kMaxPositions) throw std::runtime_error("strategy never claimed an output");
    auto node = std::make_unique<DecisionNode>();
    node->query = std::get<PositionPair>(m);
    for (Answer a : {Answer::equal, Answer::not_equal}) {
      const QueryRecord r{node->query.i, node->query.j, a};
      std::optional<KnowledgeState> next;
      try {
        next = apply_answer(k, r);
      } catch (const Contradiction&) {
        continue;
      }
      if (!is_realizable(*next)) continue;
      history.push_back(r);
      (a == Answer::equal ? node->equal : node->not_equal) = build(history, *next);
      history.pop_back();
    }
    return node;
  };
  std::vector<QueryRecord> history;
  return {s.n(), build(history, KnowledgeState(s.n()))};
}

/// Depth-limited minimax over the query game. A state is finished once some
/// position is a safe output. Feasible majority sets are tracked as a bitset
/// over all C(2n, n) candidates; an answer is legal when it leaves the set
/// non-empty. Queries with a forced answer leave the feasible family unchanged
/// and are never better than not asking, so they are skipped.
class GameSolver {
 public:
  static constexpr int kMaxN = 5;
  static constexpr std::size_t kMaxFamily = 256;
  using Family = std::bitset<kMaxFamily>;

  explicit GameSolver(int n, SearchOptions opts = {}) : n_(n), opts_(opts) {
    require_n(n);
    if (n > kMaxN) throw LimitExceeded("exact game search supports n <= 5");
    for (const auto& s : all_majority_sets(n)) combos_.push_back(s.mask());
    contains_.resize(static_cast<std::size_t>(2 * n));
    both_.assign(static_cast<std::size_t>(4 * n * n), Family{});
    for (std::size_t c = 0; c < combos_.size(); ++c) {
      full_.set(c);
      for (int p = 0; p < 2 * n; ++p)
        if ((combos_[c] & bit(p)) != 0) contains_[static_cast<std::size_t>(p)].set(c);
      for (int i = 0; i < 2 * n; ++i)
        for (int j = 0; j < 2 * n; ++j)
          if ((combos_[c] & bit(i)) != 0 && (combos_[c] & bit(j)) != 0) both(i, j).set(c);
    }
  }

  int n() const { return n_; }
  std::size_t nodes_expanded() const { return nodes_; }
  std::size_t table_size() const { return memo_.size(); }

  Family family_of(const KnowledgeState& k) const {
    Family f;
    const PositionMask forced = k.forced_majority();
    for (std::size_t c = 0; c < combos_.size(); ++c) {
      const PositionMask m = combos_[c];
      if ((forced & ~m) != 0) continue;
      bool ok = true;
      for_each_position(m, [&](int p) {
        if ((k.unequal_to(p) & m) != 0) ok = false;
      });
      if (ok) f.set(c);
    }
    return f;
  }

  std::optional<int> least_safe(const Family& f) const {
    if (f.none()) return std::nullopt;
    for (int p = 0; p < 2 * n_; ++p)
      if ((f & ~contains_[static_cast<std::size_t>(p)]).none()) return p;
    return std::nullopt;
  }

  /// Can the algorithm reach a safe output within `depth` more queries?
  bool solvable(const KnowledgeState& k, const Family& f, int depth) {
    if (least_safe(f)) return true;
    if (depth == 0) return false;
    const auto key = canonical_key(k);
    if (auto it = memo_.find(key); it != memo_.end()) {
      if (it->second.solvable_at <= depth) return true;
      if (it->second.failed_at >= depth) return false;
    }
    if (++nodes_ > opts_.node_budget) throw BudgetExhausted("node budget exhausted");
    bool result = false;
    for (int i = 0; i < 2 * n_ && !result; ++i)
      for (int j = i + 1; j < 2 * n_ && !result; ++j) result = query_wins(k, f, i, j, depth);
    auto& entry = memo_[key];
    if (result)
      entry.solvable_at = std::min(entry.solvable_at, depth);
    else
      entry.failed_at = std::max(entry.failed_at, depth);
    return result;
  }

  /// Least number of queries that guarantees a safe output from k.
  int value_of(const KnowledgeState& k) {
    const Family f = family_of(k);
    if (f.none()) throw std::invalid_argument("knowledge state admits no instance");
    for (int d = 0;; ++d)
      if (solvable(k, f, d)) return d;
  }

  GameValueReport game_value() {
    const auto start = std::chrono::steady_clock::now();
    GameValueReport r;
    r.n = n_;
    r.rule = opts_.rule;
    r.value = value_of(KnowledgeState(n_));
    r.nodes_expanded = nodes_;
    r.table_size = memo_.size();
    r.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  }

  /// Queries from the empty state after which the game still finishes within
  /// the optimal number of comparisons.
  std::vector<PositionPair> optimal_first_moves() {
    const KnowledgeState root(n_);
    const int v = value_of(root);
    std::vector<PositionPair> out;
    for (int i = 0; i < 2 * n_; ++i)
      for (int j = i + 1; j < 2 * n_; ++j)
        if (query_wins(root, full_, i, j, v)) out.push_back({i, j});
    return out;
  }

  /// Decision tree of optimal depth, choosing the lexicographically least
  /// optimal query at every node and the least safe position at every leaf.
  DecisionTree optimal_tree() {
    if (opts_.rule != AnswerRule::any) throw std::logic_error("trees are built for the unrestricted game");
    return {n_, build(KnowledgeState(n_))};
  }

 private:
  struct Entry {
    int solvable_at = 1 << 30;
    int failed_at = -1;
  };

  Family& both(int i, int j) { return both_[static_cast<std::size_t>(i * 2 * n_ + j)]; }

  bool query_wins(const KnowledgeState& k, const Family& f, int i, int j, int depth) {
    if (k.is_known(i, j)) return false;
    const Family fe = f & both(i, j);
    const Family fn = f & ~both(i, j);
    if (fe.none() || fn.none()) return false;
    if (!solvable(apply_answer(k, {i, j, Answer::not_equal}), fn, depth - 1)) return false;
    if (opts_.rule == AnswerRule::not_equal_only) return true;
    return solvable(apply_answer(k, {i, j, Answer::equal}), fe, depth - 1);
  }

  std::unique_ptr<DecisionNode> build(const KnowledgeState& k) {
    const Family f = family_of(k);
    if (auto p = least_safe(f)) return DecisionNode::leaf(*p);
    const int v = value_of(k);
    for (int i = 0; i < 2 * n_; ++i)
      for (int j = i + 1; j < 2 * n_; ++j) {
        if (!query_wins(k, f, i, j, v)) continue;
        auto node = std::make_unique<DecisionNode>();
        node->query = {i, j};
        node->equal = build(apply_answer(k, {i, j, Answer::equal}));
        node->not_equal = build(apply_answer(k, {i, j, Answer::not_equal}));
        return node;
      }
    throw std::logic_error("no optimal query found");
  }

  int n_;
  SearchOptions opts_;
  std::vector<PositionMask> combos_;
  std::vector<Family> contains_;
  std::vector<Family> both_;
  Family full_;
  std::size_t nodes_ = 0;
  std::unordered_map<CanonicalKey, Entry, CanonicalKeyHash> memo_;
};

inline GameValueReport game_value(int n, SearchOptions opts = {}) { return GameSolver(n, opts).game_value(); }

inline DecisionTree optimal_tree(int n, SearchOptions opts = {}) { return GameSolver(n, opts).optimal_tree(); }

}  // namespace majority
