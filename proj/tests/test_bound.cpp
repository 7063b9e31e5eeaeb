#include <majority/bound.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>

#include "oracle.hpp"

using namespace majority;

namespace {

// Known-equal / known-unequal fact matrix computed straight from the records,
// minimised over all position permutations.
std::string brute_canonical(int n, const std::vector<QueryRecord>& records) {
  const int size = 2 * n;
  std::vector<int> root(static_cast<std::size_t>(size));
  std::iota(root.begin(), root.end(), 0);
  std::function<int(int)> find = [&](int x) { return root[static_cast<std::size_t>(x)] == x ? x : find(root[static_cast<std::size_t>(x)]); };
  for (const auto& r : records)
    if (r.answer == Answer::equal) root[static_cast<std::size_t>(find(r.i))] = find(r.j);
  std::vector<char> fact(static_cast<std::size_t>(size * size), '.');
  for (int a = 0; a < size; ++a)
    for (int b = 0; b < size; ++b)
      if (a != b && find(a) == find(b)) fact[static_cast<std::size_t>(a * size + b)] = '=';
  for (const auto& r : records) {
    if (r.answer != Answer::not_equal) continue;
    for (int a = 0; a < size; ++a)
      for (int b = 0; b < size; ++b)
        if (find(a) == find(r.i) && find(b) == find(r.j)) {
          fact[static_cast<std::size_t>(a * size + b)] = '!';
          fact[static_cast<std::size_t>(b * size + a)] = '!';
        }
  }
  std::vector<int> perm(static_cast<std::size_t>(size));
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  do {
    std::string code(static_cast<std::size_t>(size * size), '.');
    for (int a = 0; a < size; ++a)
      for (int b = 0; b < size; ++b)
        code[static_cast<std::size_t>(perm[static_cast<std::size_t>(a)] * size + perm[static_cast<std::size_t>(b)])] =
            fact[static_cast<std::size_t>(a * size + b)];
    if (best.empty() || code < best) best = code;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<QueryRecord> permuted(const std::vector<QueryRecord>& records, const std::vector<int>& perm) {
  std::vector<QueryRecord> out;
  for (const auto& r : records) out.push_back({perm[static_cast<std::size_t>(r.i)], perm[static_cast<std::size_t>(r.j)], r.answer});
  return out;
}

const SearchOptions kRestricted{50'000'000, AnswerRule::not_equal_only};

}  // namespace

TEST(CanonicalKey, Examples) {
  const auto a = knowledge_from(2, std::vector<QueryRecord>{{0, 1, Answer::not_equal}});
  const auto b = knowledge_from(2, std::vector<QueryRecord>{{2, 3, Answer::not_equal}});
  const auto c = knowledge_from(2, std::vector<QueryRecord>{{2, 3, Answer::equal}});
  EXPECT_EQ(canonical_key(a), canonical_key(b));
  EXPECT_NE(canonical_key(a), canonical_key(c));
  EXPECT_NE(canonical_key(a), canonical_key(KnowledgeState(2)));
  EXPECT_NE(canonical_key(KnowledgeState(2)), canonical_key(KnowledgeState(3)));
  // A path and a star with three edges are different shapes.
  const auto path = knowledge_from(2, std::vector<QueryRecord>{{0, 1, Answer::not_equal}, {1, 2, Answer::not_equal}, {2, 3, Answer::not_equal}});
  const auto star = knowledge_from(2, std::vector<QueryRecord>{{0, 1, Answer::not_equal}, {0, 2, Answer::not_equal}, {0, 3, Answer::not_equal}});
  EXPECT_NE(canonical_key(path), canonical_key(star));
}

TEST(CanonicalKey, InvariantUnderRelabeling) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 2 + trial % 4;
    const auto records = trial % 3 ? oracle::random_consistent_records(n, rng, 14) : oracle::random_records(n, rng, 8);
    std::vector<int> perm(static_cast<std::size_t>(2 * n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    KnowledgeState k(n);
    try {
      k = knowledge_from(n, records);
    } catch (const Contradiction&) {
      continue;
    }
    EXPECT_EQ(canonical_key(k), canonical_key(knowledge_from(n, permuted(records, perm))));
  }
}

TEST(CanonicalKey, SeparatesExactlyTheNonIsomorphicStates) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 1500; ++trial) {
    const int n = 2 + trial % 2;
    const auto ra = oracle::random_consistent_records(n, rng, 6);
    auto rb = oracle::random_consistent_records(n, rng, 6);
    if (trial % 4 == 0) rb = ra;
    const bool same_key = canonical_key(knowledge_from(n, ra)) == canonical_key(knowledge_from(n, rb));
    EXPECT_EQ(same_key, brute_canonical(n, ra) == brute_canonical(n, rb));
  }
}

TEST(GameSolver, FamilyMatchesFeasibleSets) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 3;
    const auto records = oracle::random_consistent_records(n, rng, 8);
    GameSolver solver(n);
    const auto family = solver.family_of(knowledge_from(n, records));
    EXPECT_EQ(family.count(), oracle::feasible_sets(n, records).size());
    const auto safe = oracle::safe_positions(n, records);
    const auto least = solver.least_safe(family);
    EXPECT_EQ(least.has_value(), !safe.empty());
    if (least) {
      EXPECT_EQ(*least, safe.front());
    }
  }
}

TEST(GameSolver, MatchesNaiveMinimaxAtNTwo) {
  oracle::NaiveGame naive(2);
  const int expected = naive.value();
  GameSolver solver(2);
  EXPECT_EQ(solver.game_value().value, expected);
  std::vector<PositionPair> naive_moves;
  for (auto [i, j] : naive.optimal_first_moves()) naive_moves.push_back({i, j});
  EXPECT_EQ(solver.optimal_first_moves(), naive_moves);
}

TEST(GameSolver, MatchesNaiveMinimaxAtNThree) {
  oracle::NaiveGame naive(3);
  EXPECT_EQ(game_value(3).value, naive.value());
}

TEST(GameSolver, NotEqualOnlyMatchesNaiveMinimax) {
  for (int n = 2; n <= 3; ++n) {
    oracle::NaiveGame naive(n, true);
    EXPECT_EQ(game_value(n, kRestricted).value, naive.value()) << n;
  }
}

TEST(GameSolver, ValuesFromIntermediateStatesMatchNaive) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    const auto records = oracle::random_consistent_records(3, rng, 3);
    oracle::NaiveGame naive(3);
    auto history = records;
    int expected = 0;
    while (!naive.solvable(history, expected)) ++expected;
    GameSolver solver(3);
    EXPECT_EQ(solver.value_of(knowledge_from(3, records)), expected);
  }
}

TEST(GameSolver, ValueBracketedByKnownStrategies) {
  // The triangle strategy finishes within n+1 comparisons.
  for (int n = 2; n <= 4; ++n) {
    const int v = game_value(n).value;
    EXPECT_LE(v, n + 1) << n;
    EXPECT_LE(game_value(n, kRestricted).value, v);
  }
}

TEST(GameSolver, RejectsLargeNAndHonoursBudget) {
  EXPECT_THROW(GameSolver(6), LimitExceeded);
  EXPECT_THROW(game_value(3, {2, AnswerRule::any}), BudgetExhausted);
  const auto r = game_value(3);
  EXPECT_GT(r.nodes_expanded, 0u);
  EXPECT_GT(r.table_size, 0u);
}

TEST(DecisionTrees, OptimalTreeIsCorrectAndShallow) {
  for (int n = 2; n <= 4; ++n) {
    const auto tree = optimal_tree(n);
    const int v = game_value(n).value;
    EXPECT_EQ(tree_depth(tree), v);
    EXPECT_TRUE(leaves_are_safe(tree));
    for (const auto& s : all_majority_sets(n)) {
      const auto inst = canonical_instance(s);
      const auto result = run_tree(tree, inst);
      ASSERT_TRUE(result);
      EXPECT_TRUE(inst.is_majority(result->first));
      EXPECT_LE(result->second, v);
    }
  }
}

TEST(DecisionTrees, StrategyTrees) {
  for (int n = 2; n <= 5; ++n) {
    const auto opt = strategy_tree(OptimalStrategy(n));
    EXPECT_EQ(tree_depth(opt), n + 2);
    EXPECT_TRUE(leaves_are_safe(opt));
    const auto tri = strategy_tree(TriangleStrategy(n));
    EXPECT_EQ(tree_depth(tri), n + 1);
    EXPECT_TRUE(leaves_are_safe(tri));
  }
  const auto naive_guess = strategy_tree(ScriptedStrategy(2, {{0, 1}}));
  EXPECT_FALSE(leaves_are_safe(naive_guess));
}

TEST(DecisionTrees, RestrictedRuleHasNoTree) {
  EXPECT_THROW(optimal_tree(2, kRestricted), std::logic_error);
}
