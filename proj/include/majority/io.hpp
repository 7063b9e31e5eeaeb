#pragma once

// JSON documents exchanged by the CLI and the session service, plus CSV
// export for histograms.

#include <majority/adversary.hpp>
#include <majority/arena.hpp>
#include <majority/bound.hpp>
#include <majority/graph.hpp>
#include <majority/model.hpp>

#include <json.hpp>

#include <sstream>
#include <string>

namespace majority {

using nlohmann::json;

inline void to_json(json& j, const QueryRecord& q) { j = json{{"i", q.i}, {"j", q.j}, {"answer", to_string(q.answer)}}; }

inline void from_json(const json& j, QueryRecord& q) {
  q.i = j.at("i").get<int>();
  q.j = j.at("j").get<int>();
  q.answer = answer_from_string(j.at("answer").get<std::string>());
}

inline void to_json(json& j, const Transcript& t) {
  j = json{{"n", t.n}, {"mode", t.mode}, {"queries", t.queries}};
  if (t.output) {
    j["output"] = json{{"position", t.output->position}};
    j["output"]["value"] = t.output->value ? json(*t.output->value) : json(nullptr);
  } else {
    j["output"] = nullptr;
  }
  j["verdict"] = to_string(t.verdict);
  j["comparisons"] = t.comparisons();
}

inline void from_json(const json& j, Transcript& t) {
  t.n = j.at("n").get<int>();
  t.mode = j.at("mode").get<std::string>();
  t.queries = j.at("queries").get<std::vector<QueryRecord>>();
  t.output.reset();
  if (const auto& out = j.at("output"); !out.is_null()) {
    ClaimedOutput c;
    c.position = out.at("position").get<int>();
    if (out.contains("value") && !out["value"].is_null()) c.value = out["value"].get<int>();
    t.output = c;
  }
  t.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  if (j.contains("comparisons") && j["comparisons"].get<std::size_t>() != t.queries.size())
    throw std::invalid_argument("comparisons does not match the number of queries");
  if (t.verdict != Verdict::unresolved && !t.output) throw std::invalid_argument("a decided verdict needs an output");
}

inline json to_json(const InequalityGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({e.i, e.j});
  return {{"vertex_count", g.vertex_count()}, {"edges", edges}};
}

inline InequalityGraph graph_from_json(const json& j) {
  InequalityGraph g(j.at("vertex_count").get<int>());
  for (const auto& e : j.at("edges")) g.add_edge(e.at(0).get<int>(), e.at(1).get<int>());
  return g;
}

inline json to_json(const Instance& inst) { return json(std::vector<int>(inst.values().begin(), inst.values().end())); }

inline json to_json(const AmbiguityCertificate& c) {
  json j{{"kind", to_string(c.kind)}, {"witness_a", c.witness_a}};
  j["witness_b"] = c.witness_b ? json(*c.witness_b) : json(nullptr);
  return j;
}

inline json snapshot(const AdversaryState& s) {
  json j{{"n", s.n()},
         {"phase", to_string(s.phase())},
         {"edges", to_json(s.graph())},
         {"bottom", s.layers().bottom()},
         {"top", s.layers().top()}};
  j["committed_majority"] = s.committed_instance() ? json(s.committed_instance()->majority_set().positions()) : json(nullptr);
  return j;
}

inline json to_json(const DuelReport& r) {
  json j = r.transcript;
  j["witness"] = r.witness ? to_json(*r.witness) : json(nullptr);
  if (const auto* inst = std::get_if<Instance>(&r.opponent)) j["instance"] = to_json(*inst);
  if (r.adversary) j["adversary"] = snapshot(*r.adversary);
  return j;
}

inline json to_json(const SweepReport& r) {
  json hist = json::object();
  for (auto [comparisons, count] : r.histogram) hist[std::to_string(comparisons)] = count;
  return {{"n", r.n},
          {"strategy", r.strategy},
          {"instances_tested", r.instances_tested},
          {"failures", r.failures},
          {"max_comparisons", r.max_comparisons},
          {"histogram", hist}};
}

inline std::string histogram_csv(const SweepReport& r) {
  std::ostringstream out;
  out << "comparisons,instances\n";
  for (auto [comparisons, count] : r.histogram) out << comparisons << ',' << count << '\n';
  return out.str();
}

inline json to_json(const StressReport& r) {
  json examples = json::array();
  for (const auto& v : r.counterexamples) {
    json seq = json::array();
    for (const auto& p : v.sequence) seq.push_back({p.i, p.j});
    examples.push_back({{"sequence", seq}, {"reason", v.reason}});
  }
  return {{"n", r.n},
          {"depth", r.depth},
          {"checked_depth", r.checked_depth},
          {"mode", r.mode == StressMode::exhaustive ? "exhaustive" : "sampled"},
          {"seed", r.seed},
          {"sequences_checked", r.sequences_checked},
          {"violations", r.violations},
          {"committed_beyond", r.committed_beyond},
          {"counterexamples", examples}};
}

inline json to_json(const GameValueReport& r) {
  return {{"n", r.n},
          {"value", r.value},
          {"answers", r.rule == AnswerRule::any ? "any" : "not_equal_only"},
          {"nodes_expanded", r.nodes_expanded},
          {"table_size", r.table_size},
          {"elapsed", r.elapsed_seconds}};
}

inline json to_json(const DecisionNode* node) {
  if (node == nullptr) return nullptr;
  if (node->output) return {{"output", *node->output}};
  return {{"query", {node->query.i, node->query.j}}, {"equal", to_json(node->equal.get())}, {"not_equal", to_json(node->not_equal.get())}};
}

inline json to_json(const DecisionTree& t) { return to_json(t.root.get()); }

inline std::unique_ptr<DecisionNode> tree_node_from_json(const json& j) {
  if (j.is_null()) return nullptr;
  if (j.contains("output")) return DecisionNode::leaf(j["output"].get<int>());
  auto node = std::make_unique<DecisionNode>();
  node->query = PositionPair::of(j.at("query").at(0).get<int>(), j.at("query").at(1).get<int>());
  node->equal = tree_node_from_json(j.at("equal"));
  node->not_equal = tree_node_from_json(j.at("not_equal"));
  return node;
}

inline DecisionTree tree_from_json(int n, const json& j) { return {n, tree_node_from_json(j)}; }

}  // namespace majority
