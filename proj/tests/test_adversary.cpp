#include <majority/adversary.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracle.hpp"

using namespace majority;

namespace {

std::vector<QueryRecord> log_of(const AdversaryState& s) {
  std::vector<QueryRecord> out;
  for (const auto& [p, a] : s.answer_cache()) out.push_back({p.i, p.j, a});
  return out;
}

bool instance_replays(const Instance& inst, const AdversaryState& s) {
  for (const auto& [p, a] : s.answer_cache())
    if (oracle_answer(inst, p.i, p.j) != a) return false;
  return true;
}

std::vector<int> values(const Instance& inst) { return {inst.values().begin(), inst.values().end()}; }

}  // namespace

TEST(Adversary, FreshState) {
  const AdversaryState s(2);
  EXPECT_EQ(s.phase(), Phase::ambiguous);
  EXPECT_EQ(s.layers().bottom(), (std::vector<int>{0, 1}));
  EXPECT_EQ(s.layers().top(), (std::vector<int>{2, 3}));
  EXPECT_EQ(s.graph().edge_count(), 0u);
  EXPECT_THROW(AdversaryState(1), std::invalid_argument);
}

TEST(Adversary, InterLayerQueryNeedsNoFlip) {
  AdversaryState s(2);
  EXPECT_EQ(s.respond(0, 2), Answer::not_equal);
  EXPECT_TRUE(s.graph().has_edge(0, 2));
  EXPECT_EQ(s.layers().bottom(), (std::vector<int>{0, 1}));
}

TEST(Adversary, IntraLayerQueryFlipsAPillar) {
  AdversaryState s(2);
  s.respond(0, 2);
  s.respond(1, 3);
  EXPECT_EQ(s.respond(0, 1), Answer::not_equal);
  EXPECT_EQ(s.phase(), Phase::ambiguous);
  EXPECT_EQ(s.layers().bottom(), (std::vector<int>{1, 2}));
  EXPECT_EQ(s.layers().top(), (std::vector<int>{0, 3}));
  EXPECT_TRUE(all_edges_cross(s.graph(), s.layers()));
}

TEST(Adversary, OddCycleForcesCommitmentToLeastFeasibleSet) {
  // Every balanced split of four vertices leaves an edge of the triangle 0-1-2 inside a layer.
  const std::vector<oracle::Edge> edges{{0, 2}, {1, 3}, {0, 1}, {1, 2}};
  ASSERT_TRUE(oracle::crossing_splits(4, edges).empty());

  AdversaryState s(2);
  s.respond(0, 2);
  s.respond(1, 3);
  s.respond(0, 1);
  EXPECT_EQ(s.respond(2, 1), Answer::not_equal);
  EXPECT_EQ(s.phase(), Phase::committed);
  ASSERT_TRUE(s.committed_instance());
  const auto expected = oracle::feasible_sets(2, log_of(s)).front();
  EXPECT_EQ(s.committed_instance()->majority_set().positions(), expected);
  EXPECT_EQ(expected, (std::vector<int>{0, 3}));
  EXPECT_EQ(values(*s.committed_instance()), (std::vector<int>{0, 1, 2, 0}));
  EXPECT_EQ(s.respond(0, 3), Answer::equal);
  EXPECT_EQ(s.respond(2, 3), Answer::not_equal);
  EXPECT_TRUE(instance_replays(*s.committed_instance(), s));
}

TEST(Adversary, RepeatedQueriesReturnTheCachedAnswer) {
  AdversaryState s(2);
  s.respond(0, 1);
  const auto before = s.layers().bottom_mask();
  EXPECT_EQ(s.respond(1, 0), Answer::not_equal);
  EXPECT_EQ(s.layers().bottom_mask(), before);
  EXPECT_EQ(s.answer_cache().size(), 1u);
  EXPECT_THROW(s.respond(1, 1), std::invalid_argument);
  EXPECT_THROW(s.respond(0, 9), std::out_of_range);
}

TEST(Adversary, ValueStyleRespondLeavesInputUntouched) {
  const AdversaryState s(3);
  auto [a, next] = respond(s, 0, 1);
  EXPECT_EQ(a, Answer::not_equal);
  EXPECT_EQ(s.graph().edge_count(), 0u);
  EXPECT_EQ(next.graph().edge_count(), 1u);
}

TEST(Witness, FreshAdversaryOffersTheOtherLayer) {
  const AdversaryState s(2);
  const auto w = extract_witness(s, 0);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->majority_set().positions(), (std::vector<int>{2, 3}));
  EXPECT_EQ(values(*w), (std::vector<int>{1, 2, 0, 0}));
  EXPECT_THROW(extract_witness(s, 4), std::out_of_range);
}

TEST(Witness, AfterFlipReplaysEveryAnswer) {
  AdversaryState s(2);
  s.respond(0, 2);
  s.respond(1, 3);
  s.respond(0, 1);
  const auto w = extract_witness(s, 1);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->majority_set().positions(), (std::vector<int>{0, 3}));
  EXPECT_TRUE(instance_replays(*w, s));
}

TEST(Witness, CommittedPhaseUsesFeasibleSetsAvoidingTheClaim) {
  AdversaryState s(2);
  for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {0, 2}}) s.respond(i, j);
  // Only position 3 lies in every feasible set now.
  EXPECT_EQ(oracle::safe_positions(2, log_of(s)), (std::vector<int>{3}));
  EXPECT_FALSE(extract_witness(s, 3));
  const auto w = extract_witness(s, 0);
  ASSERT_TRUE(w);
  EXPECT_FALSE(w->is_majority(0));
  EXPECT_TRUE(instance_replays(*w, s));
}

TEST(DefeatCheck, JudgesOutputs) {
  AdversaryState s(2);
  s.respond(0, 1);
  s.respond(2, 3);
  Transcript t{2, "adversary", {{0, 1, Answer::not_equal}, {2, 3, Answer::not_equal}}, std::nullopt, Verdict::unresolved};
  EXPECT_EQ(defeat_check(s, t), Verdict::unresolved);
  t.output = ClaimedOutput{0, std::nullopt};
  EXPECT_EQ(defeat_check(s, t), Verdict::wrong);

  Transcript forged = t;
  forged.queries[0].answer = Answer::equal;
  EXPECT_THROW(defeat_check(s, forged), std::invalid_argument);
  Transcript unknown = t;
  unknown.queries.push_back({0, 2, Answer::not_equal});
  EXPECT_THROW(defeat_check(s, unknown), std::invalid_argument);
}

TEST(DefeatCheck, TriangleDecidesWithinNPlusOneQueries) {
  // Three pairwise comparisons among 0,1,2 at n = 2 are not bipartite, so the
  // adversary must concede: the remaining position is forced into the majority.
  AdversaryState s(2);
  Transcript t{2, "adversary", {}, std::nullopt, Verdict::unresolved};
  for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {0, 2}}) t.queries.push_back({i, j, s.respond(i, j)});
  EXPECT_EQ(s.phase(), Phase::committed);
  t.output = ClaimedOutput{3, std::nullopt};
  EXPECT_EQ(defeat_check(s, t), Verdict::correct);
}

TEST(Certificate, TracksLayersWhileAmbiguous) {
  AdversaryState s(2);
  s.respond(0, 1);
  const auto c = s.certificate();
  EXPECT_EQ(c.kind, CertificateKind::two_disjoint_n_cliques);
  EXPECT_TRUE(validate_certificate(s.graph(), 2, c));
}

TEST(Certificate, NoneOnceAmbiguityIsLost) {
  AdversaryState s(2);
  for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {0, 2}}) s.respond(i, j);
  EXPECT_EQ(s.certificate().kind, CertificateKind::none);
  s.respond(0, 3);
  EXPECT_EQ(s.certificate().kind, CertificateKind::none);
}

TEST(Certificate, StarCommitsWhileACliqueCertificateRemains) {
  // Three edges at one vertex admit no balanced crossing split when n = 2,
  // yet {1,2,3} is still an independent (n+1)-set.
  AdversaryState s(2);
  for (int j = 1; j <= 3; ++j) s.respond(0, j);
  EXPECT_EQ(s.phase(), Phase::committed);
  const auto c = s.certificate();
  EXPECT_EQ(c.kind, CertificateKind::one_n_plus_1_clique);
  EXPECT_EQ(c.witness_a, (std::vector<int>{1, 2, 3}));
  EXPECT_TRUE(oracle::safe_positions(2, log_of(s)).empty());
}

TEST(Adversary, AnswersAreAlwaysRealizable) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 600; ++trial) {
    const int n = 2 + trial % 3;
    std::uniform_int_distribution<int> pos(0, 2 * n - 1);
    AdversaryState s(n);
    for (int q = 0; q < 3 * n; ++q) {
      int i = pos(rng), j = pos(rng);
      if (i == j) continue;
      s.respond(i, j);
      const auto logged = log_of(s);
      ASSERT_FALSE(oracle::feasible_sets(n, logged).empty());
      if (s.phase() == Phase::ambiguous) {
        ASSERT_TRUE(all_edges_cross(s.graph(), s.layers()));
        ASSERT_TRUE(oracle::explains(s.layers().bottom_mask(), logged));
        ASSERT_TRUE(oracle::explains(s.layers().top_mask(), logged));
      } else {
        ASSERT_TRUE(instance_replays(*s.committed_instance(), s));
      }
    }
  }
}

TEST(Adversary, PerfectMatchingPrefixNeverCommits) {
  // The pair phase of any pairing strategy: n disjoint edges always admit crossing layers.
  std::mt19937_64 rng(5);
  for (int n = 2; n <= 10; ++n) {
    std::vector<int> perm(static_cast<std::size_t>(2 * n));
    std::iota(perm.begin(), perm.end(), 0);
    for (int rep = 0; rep < 20; ++rep) {
      std::shuffle(perm.begin(), perm.end(), rng);
      AdversaryState s(n);
      for (int k = 0; k < n; ++k) s.respond(perm[static_cast<std::size_t>(2 * k)], perm[static_cast<std::size_t>(2 * k + 1)]);
      EXPECT_EQ(s.phase(), Phase::ambiguous);
      EXPECT_TRUE(is_perfect_matching(s.graph()));
    }
  }
}

TEST(Adversary, Deterministic) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 4;
    std::uniform_int_distribution<int> pos(0, 2 * n - 1);
    std::vector<std::pair<int, int>> seq;
    while (seq.size() < static_cast<std::size_t>(2 * n + 2)) {
      int i = pos(rng), j = pos(rng);
      if (i != j) seq.emplace_back(i, j);
    }
    AdversaryState a(n), b(n);
    for (auto [i, j] : seq) {
      ASSERT_EQ(a.respond(i, j), b.respond(i, j));
      ASSERT_EQ(a.layers().bottom_mask(), b.layers().bottom_mask());
      ASSERT_EQ(a.phase(), b.phase());
    }
    if (a.committed_instance()) {
      EXPECT_EQ(a.committed_instance()->majority_set(), b.committed_instance()->majority_set());
    }
  }
}
