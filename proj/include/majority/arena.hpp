#pragma once

// Games between strategies and opponents, exhaustive sweeps over instances
// and adversary stress enumerations.

#include <majority/adversary.hpp>
#include <majority/graph.hpp>
#include <majority/model.hpp>
#include <majority/strategy.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace majority {

/// What happens when a strategy reaches its comparison budget without claiming.
enum class BudgetPolicy {
  unresolved,    // the game ends without an output
  force_output,  // the strategy is asked for its best claim right now
};

struct AdversaryDescriptor {
  int n = 0;
};

struct DuelReport {
  Transcript transcript;
  std::variant<Instance, AdversaryDescriptor> opponent;
  std::optional<Instance> witness;
  std::optional<AdversaryState> adversary;
};

struct SweepReport {
  int n = 0;
  std::string strategy;
  std::size_t instances_tested = 0;
  std::size_t failures = 0;
  std::size_t max_comparisons = 0;
  std::map<std::size_t, std::size_t> histogram;
};

/// Games running past this many queries are treated as a strategy bug.
inline constexpr std::size_t kMaxGameLength = 1 << 16;

namespace detail {

template <class Answerer, class Finish>
Transcript play(const Strategy& strategy, std::string mode, std::optional<std::size_t> budget, BudgetPolicy policy,
                Answerer&& answer, Finish&& finish) {
  Transcript t;
  t.n = strategy.n();
  t.mode = std::move(mode);
  while (true) {
    if (budget && t.queries.size() >= *budget) {
      const Move m = strategy.next(t.queries);
      if (auto* c = std::get_if<Claim>(&m)) {
        finish(t, c->position);
      } else if (policy == BudgetPolicy::force_output) {
        finish(t, strategy.output_now(t.queries));
      }
      return t;
    }
    const Move m = strategy.next(t.queries);
    if (auto* c = std::get_if<Claim>(&m)) {
      finish(t, c->position);
      return t;
    }
    const auto& q = std::get<PositionPair>(m);
    t.queries.push_back({q.i, q.j, answer(q.i, q.j)});
    if (t.queries.size() > kMaxGameLength) throw std::runtime_error("strategy never claimed an output");
  }
}

}  // namespace detail

inline DuelReport run_vs_instance(const Strategy& strategy, const Instance& inst,
                                  std::optional<std::size_t> budget = std::nullopt,
                                  BudgetPolicy policy = BudgetPolicy::unresolved) {
  if (strategy.n() != inst.n()) throw std::invalid_argument("strategy and instance disagree on n");
  auto t = detail::play(
      strategy, "instance", budget, policy, [&](int i, int j) { return oracle_answer(inst, i, j); },
      [&](Transcript& tr, int position) {
        if (position < 0 || position >= inst.size()) throw std::out_of_range("claimed position out of range");
        tr.output = ClaimedOutput{position, inst.value(position)};
        tr.verdict = inst.is_majority(position) ? Verdict::correct : Verdict::wrong;
      });
  return {std::move(t), inst, std::nullopt, std::nullopt};
}

inline DuelReport run_vs_adversary(const Strategy& strategy, int n, std::optional<std::size_t> budget = std::nullopt,
                                   BudgetPolicy policy = BudgetPolicy::force_output) {
  if (strategy.n() != n) throw std::invalid_argument("strategy and adversary disagree on n");
  AdversaryState adversary(n);
  std::optional<Instance> witness;
  auto t = detail::play(
      strategy, "adversary", budget, policy, [&](int i, int j) { return adversary.respond(i, j); },
      [&](Transcript& tr, int position) {
        if (position < 0 || position >= 2 * n) throw std::out_of_range("claimed position out of range");
        tr.output = ClaimedOutput{position, std::nullopt};
        tr.verdict = defeat_check(adversary, tr);
        if (tr.verdict == Verdict::wrong) witness = extract_witness(adversary, position);
      });
  return {std::move(t), AdversaryDescriptor{n}, std::move(witness), std::move(adversary)};
}

/// True iff every recorded answer matches the instance and the verdict matches
/// the correctness of the claimed output.
inline bool verify_transcript(const Transcript& t, const Instance& inst) {
  if (t.n != inst.n()) return false;
  for (const auto& q : t.queries) {
    if (q.i < 0 || q.j < 0 || q.i >= inst.size() || q.j >= inst.size() || q.i == q.j) return false;
    if (oracle_answer(inst, q.i, q.j) != q.answer) return false;
  }
  if (!t.output) return t.verdict == Verdict::unresolved;
  const int p = t.output->position;
  if (p < 0 || p >= inst.size()) return false;
  if (t.output->value && *t.output->value != inst.value(p)) return false;
  return t.verdict == (inst.is_majority(p) ? Verdict::correct : Verdict::wrong);
}

/// True iff the witness is consistent with every answer and defeats the claim.
inline bool validate_witness(const Transcript& t, const Instance& witness) {
  if (witness.n() != t.n || !t.output) return false;
  for (const auto& q : t.queries)
    if (oracle_answer(witness, q.i, q.j) != q.answer) return false;
  return !witness.is_majority(t.output->position);
}

inline constexpr int kDefaultSweepLimit = 6;

/// Runs the strategy against every canonical instance for n.
inline SweepReport exhaustive_sweep(const Strategy& strategy, int n, int limit = kDefaultSweepLimit) {
  if (n > limit) throw LimitExceeded("n exceeds the sweep limit");
  if (strategy.n() != n) throw std::invalid_argument("strategy and sweep disagree on n");
  SweepReport r;
  r.n = n;
  r.strategy = strategy.name();
  for (const auto& s : all_majority_sets(n)) {
    const auto report = run_vs_instance(strategy, canonical_instance(s));
    ++r.instances_tested;
    if (report.transcript.verdict != Verdict::correct) ++r.failures;
    r.max_comparisons = std::max(r.max_comparisons, report.transcript.comparisons());
    ++r.histogram[report.transcript.comparisons()];
  }
  return r;
}

enum class StressMode { exhaustive, sampled };

struct StressOptions {
  int n = 2;
  int depth = 3;
  StressMode mode = StressMode::exhaustive;
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  /// Checks apply to sequences no longer than this; defaults to n+1.
  std::optional<int> checked_depth;
};

struct StressViolation {
  std::vector<PositionPair> sequence;
  std::string reason;
};

struct StressReport {
  int n = 0;
  int depth = 0;
  int checked_depth = 0;
  StressMode mode = StressMode::exhaustive;
  std::uint64_t seed = 0;
  std::size_t sequences_checked = 0;
  std::size_t violations = 0;
  /// Sequences longer than checked_depth after which the adversary had committed.
  std::size_t committed_beyond = 0;
  std::vector<StressViolation> counterexamples;
};

inline constexpr int kExhaustiveStressLimit = 3;
inline constexpr std::size_t kMaxCounterexamples = 10;

namespace detail {

// Empty string when the adversary holds the layer invariant with a valid
// certificate; otherwise the reason it does not.
inline std::string ambiguity_failure(const AdversaryState& s) {
  if (s.phase() != Phase::ambiguous) return "adversary committed";
  if (!all_edges_cross(s.graph(), s.layers())) return "layer invariant broken";
  const auto cert = ambiguity_certificate(s.graph(), s.n());
  if (cert.kind == CertificateKind::none) return "no ambiguity certificate";
  if (!validate_certificate(s.graph(), s.n(), cert)) return "invalid certificate";
  return {};
}

class StressRun {
 public:
  StressRun(const StressOptions& o, StressReport& r) : opts_(o), report_(r) {
    for (int i = 0; i < 2 * o.n; ++i)
      for (int j = i + 1; j < 2 * o.n; ++j) pairs_.push_back({i, j});
  }

  void exhaustive(const AdversaryState& s, std::vector<PositionPair>& seq) {
    if (static_cast<int>(seq.size()) == opts_.depth) return;
    for (const auto& p : pairs_) {
      AdversaryState next = s;
      next.respond(p.i, p.j);
      seq.push_back(p);
      check(next, seq);
      exhaustive(next, seq);
      seq.pop_back();
    }
  }

  void sampled() {
    std::mt19937_64 rng(opts_.seed);
    for (std::size_t k = 0; k < opts_.samples; ++k) {
      AdversaryState s(opts_.n);
      std::vector<PositionPair> seq;
      for (int d = 0; d < opts_.depth; ++d) {
        const auto& p = pairs_[static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * pairs_.size()) >> 64)];
        s.respond(p.i, p.j);
        seq.push_back(p);
        check(s, seq);
      }
    }
  }

 private:
  void check(const AdversaryState& s, const std::vector<PositionPair>& seq) {
    if (static_cast<int>(seq.size()) > report_.checked_depth) {
      if (s.phase() == Phase::committed) ++report_.committed_beyond;
      return;
    }
    ++report_.sequences_checked;
    auto reason = ambiguity_failure(s);
    if (reason.empty()) return;
    ++report_.violations;
    if (report_.counterexamples.size() < kMaxCounterexamples) report_.counterexamples.push_back({seq, std::move(reason)});
  }

  const StressOptions& opts_;
  StressReport& report_;
  std::vector<PositionPair> pairs_;
};

}  // namespace detail

/// Feeds query sequences to fresh pillar adversaries and checks, after every
/// sequence up to the checked depth, that the adversary is still ambiguous
/// with a valid certificate.
inline StressReport adversary_stress(const StressOptions& opts) {
  require_n(opts.n);
  if (opts.depth < 0) throw std::invalid_argument("depth must be non-negative");
  if (opts.mode == StressMode::exhaustive && opts.n > kExhaustiveStressLimit)
    throw LimitExceeded("exhaustive stress is limited to small n; use sampled mode");
  StressReport r;
  r.n = opts.n;
  r.depth = opts.depth;
  r.checked_depth = opts.checked_depth.value_or(opts.n + 1);
  r.mode = opts.mode;
  r.seed = opts.seed;
  detail::StressRun run(opts, r);
  if (opts.mode == StressMode::exhaustive) {
    std::vector<PositionPair> seq;
    run.exhaustive(AdversaryState(opts.n), seq);
  } else {
    run.sampled();
  }
  return r;
}

}  // namespace majority
