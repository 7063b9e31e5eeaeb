#pragma once

// Pillar adversary: answers "not equal" while it can keep every inequality
// edge between its two layers, so both layers stay feasible majority sets.

#include <majority/graph.hpp>
#include <majority/model.hpp>

#include <map>
#include <optional>
#include <string_view>
#include <utility>

namespace majority {

enum class Phase { ambiguous, committed };

constexpr std::string_view to_string(Phase p) { return p == Phase::ambiguous ? "ambiguous" : "committed"; }

class AdversaryState {
 public:
  explicit AdversaryState(int n) : n_(n), graph_(checked_size(n)), layers_(2 * n, low_bits(n)), knowledge_(n) {}

  int n() const { return n_; }
  const InequalityGraph& graph() const { return graph_; }
  const LayerAssignment& layers() const { return layers_; }
  Phase phase() const { return phase_; }
  const std::optional<Instance>& committed_instance() const { return committed_; }
  const KnowledgeState& knowledge() const { return knowledge_; }
  const std::map<PositionPair, Answer>& answer_cache() const { return cache_; }

  std::optional<Answer> cached(int i, int j) const {
    auto it = cache_.find(PositionPair::of(i, j));
    if (it == cache_.end()) return std::nullopt;
    return it->second;
  }

  Answer respond(int i, int j) {
    require_pair(2 * n_, i, j);
    if (auto hit = cached(i, j)) return *hit;

    if (phase_ == Phase::committed) {
      const Answer a = oracle_answer(*committed_, i, j);
      record(i, j, a);
      return a;
    }

    record(i, j, Answer::not_equal);
    if (!layers_.same_layer(i, j)) return Answer::not_equal;
    if (repair_by_swap(i) || repair_by_swap(j)) return Answer::not_equal;
    if (auto relaid = balanced_crossing_assignment(graph_, layers_)) {
      layers_ = *relaid;
      return Answer::not_equal;
    }
    commit();
    return Answer::not_equal;
  }

  /// Two disjoint complement n-cliques (the layers) while ambiguous. Once
  /// committed, the graph certificate still applies if every answer so far
  /// was "not equal"; an "equal" answer leaves nothing to certify.
  AmbiguityCertificate certificate() const {
    if (phase_ == Phase::ambiguous) {
      auto a = layers_.bottom();
      auto b = layers_.top();
      if (b.front() < a.front()) std::swap(a, b);
      return {CertificateKind::two_disjoint_n_cliques, std::move(a), std::move(b)};
    }
    for (const auto& [pair, answer] : cache_)
      if (answer == Answer::equal) return {};
    return ambiguity_certificate(graph_, n_);
  }

 private:
  static int checked_size(int n) {
    require_n(n);
    return 2 * n;
  }

  void record(int i, int j, Answer a) {
    cache_.emplace(PositionPair::of(i, j), a);
    knowledge_.apply({i, j, a});
    if (a == Answer::not_equal) graph_.add_edge(i, j);
  }

  // Pillar flip: move `e` across and bring one of its earlier partners back.
  bool repair_by_swap(int e) {
    for (int partner : positions_of(graph_.neighbors(e) & ~layers_.layer_of(e))) {
      const auto candidate = layers_.swapped(e, partner);
      if (all_edges_cross(graph_, candidate)) {
        layers_ = candidate;
        return true;
      }
    }
    return false;
  }

  void commit() {
    // The layer holding neither endpoint of the last edge is still feasible,
    // so a feasible set always exists here.
    const auto chosen = first_feasible_majority_set(knowledge_);
    committed_ = canonical_instance(*chosen);
    phase_ = Phase::committed;
  }

  int n_;
  InequalityGraph graph_;
  LayerAssignment layers_;
  Phase phase_ = Phase::ambiguous;
  std::optional<Instance> committed_;
  std::map<PositionPair, Answer> cache_;
  KnowledgeState knowledge_;
};

/// Value-style respond: returns the answer and the successor state.
inline std::pair<Answer, AdversaryState> respond(AdversaryState s, int i, int j) {
  const Answer a = s.respond(i, j);
  return {a, std::move(s)};
}

/// A canonical instance consistent with every answer given so far whose
/// majority set avoids `claimed`, if one exists.
inline std::optional<Instance> extract_witness(const AdversaryState& s, int claimed) {
  if (claimed < 0 || claimed >= 2 * s.n()) throw std::out_of_range("claimed position out of range");
  if (s.phase() == Phase::ambiguous) {
    const PositionMask other = s.layers().in_bottom(claimed) ? s.layers().top_mask() : s.layers().bottom_mask();
    return canonical_instance(MajoritySet::from_mask(s.n(), other));
  }
  if (auto set = first_feasible_majority_set(s.knowledge(), bit(claimed))) return canonical_instance(*set);
  return std::nullopt;
}

/// Replays the transcript against the adversary's answer log and judges its
/// output: wrong whenever a consistent instance defeats the claim.
inline Verdict defeat_check(const AdversaryState& s, const Transcript& t) {
  if (t.n != s.n()) throw std::invalid_argument("transcript and adversary disagree on n");
  for (const auto& q : t.queries) {
    const auto a = s.cached(q.i, q.j);
    if (!a || *a != q.answer) throw std::invalid_argument("transcript does not replay against this adversary");
  }
  if (!t.output) return Verdict::unresolved;
  return extract_witness(s, t.output->position) ? Verdict::wrong : Verdict::correct;
}

}  // namespace majority
