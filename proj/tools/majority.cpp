// Command-line driver: games, sweeps, adversary stress runs, exact bounds and
// the session service.

#include <majority/majority.hpp>

#include "service.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace majority;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitError = 2;
constexpr int kDefaultPort = 8080;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("malformed JSON in " + path + ": " + e.what());
  }
}

// Seeded, platform-independent choice of n majority positions.
MajoritySet random_majority_set(int n, std::uint64_t seed) {
  require_n(n);
  std::mt19937_64 rng(seed);
  std::vector<int> positions(static_cast<std::size_t>(2 * n));
  std::iota(positions.begin(), positions.end(), 0);
  for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k) {
    const auto remaining = positions.size() - k;
    const auto pick = k + static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * remaining) >> 64);
    std::swap(positions[k], positions[pick]);
  }
  positions.resize(static_cast<std::size_t>(n));
  return MajoritySet(n, positions);
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

struct StrategyFlags {
  std::string name = "optimal";
  std::uint64_t seed = 0;
  std::size_t cap = 64;

  void add(CLI::App* cmd) {
    cmd->add_option("--strategy", name, "optimal, triangle, all-pairs or random")
        ->check(CLI::IsMember({"optimal", "triangle", "all-pairs", "random"}))
        ->capture_default_str();
    cmd->add_option("--strategy-seed", seed, "seed of the random strategy")->capture_default_str();
    cmd->add_option("--cap", cap, "random draws before the random strategy falls back to all pairs")
        ->capture_default_str();
  }

  std::unique_ptr<Strategy> make(int n) const { return make_strategy(name, n, {seed, cap}); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equality-comparison majority laboratory"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "run a strategy on one instance; exit 0 iff its output is correct");
  std::vector<int> values;
  std::vector<int> majority;
  std::optional<int> solve_n;
  std::optional<std::uint64_t> instance_seed;
  std::string input;
  std::optional<std::size_t> solve_budget;
  StrategyFlags solve_strategy;
  solve->add_option("--values", values, "comma-separated instance values")->delimiter(',');
  solve->add_option("--n", solve_n, "half the instance length, with --majority or --seed");
  solve->add_option("--majority", majority, "comma-separated majority positions")->delimiter(',');
  solve->add_option("--seed", instance_seed, "seed for a random instance");
  solve->add_option("--input", input, "JSON file holding a value array or {\"values\": [...]}");
  solve->add_option("--budget", solve_budget, "comparison budget; the game is unresolved past it");
  solve_strategy.add(solve);

  // duel
  auto* duel = app.add_subcommand("duel", "play a strategy against the pillar adversary");
  int duel_n = 2;
  std::optional<std::size_t> duel_budget;
  StrategyFlags duel_strategy;
  duel->add_option("--n", duel_n)->required();
  duel->add_option("--budget", duel_budget, "comparisons before the strategy must output");
  duel_strategy.add(duel);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a strategy on every canonical instance");
  int sweep_n = 2;
  std::string format = "json";
  StrategyFlags sweep_strategy;
  sweep->add_option("--n", sweep_n)->required();
  sweep->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  sweep_strategy.add(sweep);

  // stress
  auto* stress = app.add_subcommand("stress", "feed query sequences to the adversary; exit 1 on violations");
  StressOptions stress_opts;
  bool exhaustive = false;
  stress->add_option("--n", stress_opts.n)->required();
  stress->add_option("--depth", stress_opts.depth)->required();
  stress->add_flag("--exhaustive", exhaustive, "enumerate every sequence (n <= 3)");
  stress->add_option("--samples", stress_opts.samples, "sampled sequences")->capture_default_str();
  stress->add_option("--seed", stress_opts.seed)->capture_default_str();
  stress->add_option("--checked-depth", stress_opts.checked_depth, "check sequences up to this length (default n+1)");

  // verify-bound
  auto* bound = app.add_subcommand("verify-bound", "exact game value; exit 1 unless it equals n+2");
  int bound_n = 2;
  std::string answers = "any";
  std::size_t node_budget = SearchOptions{}.node_budget;
  bound->add_option("--n", bound_n)->required();
  bound->add_option("--answers", answers, "any or not_equal_only")
      ->check(CLI::IsMember({"any", "not_equal_only"}))
      ->capture_default_str();
  bound->add_option("--budget", node_budget, "search node budget")->capture_default_str();

  // tree
  auto* tree = app.add_subcommand("tree", "print a decision tree: optimal by search, or a strategy's");
  int tree_n = 2;
  std::optional<std::string> tree_strategy;
  tree->add_option("--n", tree_n)->required();
  tree->add_option("--strategy", tree_strategy, "strategy whose tree to print instead of the optimal one")
      ->check(CLI::IsMember({"optimal", "triangle", "all-pairs"}));

  // replay
  auto* replay = app.add_subcommand("replay", "check a transcript document; exit 0 iff it replays");
  std::string replay_input;
  std::vector<int> replay_values;
  replay->add_option("--input", replay_input, "transcript or duel report JSON")->required();
  replay->add_option("--values", replay_values, "instance for instance-mode transcripts")->delimiter(',');

  // serve
  auto* serve = app.add_subcommand("serve", "run the session service");
  std::string host = "127.0.0.1";
  std::optional<int> port;
  std::string persist_dir;
  std::uint64_t serve_seed = 0;
  int idle_minutes = 30;
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port, "port (default $MAJORITY_PORT or 8080)");
  serve->add_option("--persist-dir", persist_dir, "directory for finished transcripts");
  serve->add_option("--seed", serve_seed, "seed for session ids")->capture_default_str();
  serve->add_option("--idle-timeout", idle_minutes, "minutes before an idle session expires")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      std::optional<Instance> inst;
      std::optional<std::uint64_t> echoed_seed;
      if (!values.empty()) {
        inst = Instance(values);
      } else if (!input.empty()) {
        const auto doc = read_json_file(input);
        inst = Instance(doc.is_array() ? doc.get<std::vector<int>>() : doc.at("values").get<std::vector<int>>());
      } else if (solve_n && !majority.empty()) {
        inst = canonical_instance(MajoritySet(*solve_n, majority), *solve_n);
      } else if (solve_n && instance_seed) {
        inst = canonical_instance(random_majority_set(*solve_n, *instance_seed));
        echoed_seed = instance_seed;
      } else {
        throw std::invalid_argument("give --values, --input, or --n with --majority or --seed");
      }
      const auto report = run_vs_instance(*solve_strategy.make(inst->n()), *inst, solve_budget);
      json out = to_json(report);
      if (echoed_seed) out["seed"] = *echoed_seed;
      if (solve_strategy.name == "random") out["strategy_seed"] = solve_strategy.seed;
      print(out);
      return report.transcript.verdict == Verdict::correct ? 0 : kExitFailure;
    }
    if (*duel) {
      const auto report = run_vs_adversary(*duel_strategy.make(duel_n), duel_n, duel_budget);
      json out = to_json(report);
      out["strategy"] = duel_strategy.name;
      if (duel_strategy.name == "random") out["strategy_seed"] = duel_strategy.seed;
      print(out);
      return 0;
    }
    if (*sweep) {
      const auto report = exhaustive_sweep(*sweep_strategy.make(sweep_n), sweep_n);
      if (format == "csv")
        std::cout << histogram_csv(report);
      else
        print(to_json(report));
      return report.failures == 0 ? 0 : kExitFailure;
    }
    if (*stress) {
      stress_opts.mode = exhaustive ? StressMode::exhaustive : StressMode::sampled;
      const auto report = adversary_stress(stress_opts);
      print(to_json(report));
      return report.violations == 0 ? 0 : kExitFailure;
    }
    if (*bound) {
      const AnswerRule rule = answers == "any" ? AnswerRule::any : AnswerRule::not_equal_only;
      const auto report = game_value(bound_n, {node_budget, rule});
      json out = to_json(report);
      out["expected"] = bound_n + 2;
      print(out);
      return report.value == bound_n + 2 ? 0 : kExitFailure;
    }
    if (*tree) {
      const auto t = tree_strategy ? strategy_tree(*make_strategy(*tree_strategy, tree_n)) : optimal_tree(tree_n);
      print({{"n", tree_n}, {"depth", tree_depth(t)}, {"safe", leaves_are_safe(t)}, {"tree", to_json(t)}});
      return 0;
    }
    if (*replay) {
      const auto doc = read_json_file(replay_input);
      const auto t = doc.get<Transcript>();
      bool valid = false;
      std::string reason;
      if (t.mode == "instance") {
        std::vector<int> vals = replay_values;
        if (vals.empty() && doc.contains("instance")) vals = doc["instance"].get<std::vector<int>>();
        if (vals.empty()) throw std::invalid_argument("instance-mode transcripts need --values");
        valid = verify_transcript(t, Instance(vals));
        if (!valid) reason = "answers or verdict disagree with the instance";
      } else if (t.mode == "adversary") {
        AdversaryState adversary(t.n);
        valid = true;
        for (const auto& q : t.queries)
          if (adversary.respond(q.i, q.j) != q.answer) {
            valid = false;
            reason = "the adversary answers differently";
            break;
          }
        if (valid && t.output && defeat_check(adversary, t) != t.verdict) {
          valid = false;
          reason = "verdict disagrees with the adversary";
        }
      } else {
        throw std::invalid_argument("cannot replay transcripts of mode " + t.mode);
      }
      json out{{"valid", valid}, {"mode", t.mode}, {"comparisons", t.comparisons()}};
      if (!valid) out["reason"] = reason;
      print(out);
      return valid ? 0 : kExitFailure;
    }
    if (*serve) {
      int chosen = kDefaultPort;
      if (port) {
        chosen = *port;
      } else if (const char* env = std::getenv("MAJORITY_PORT")) {
        chosen = std::stoi(env);
      }
      SessionManager::Options opts;
      opts.seed = serve_seed;
      opts.idle_timeout = std::chrono::minutes(idle_minutes);
      if (!persist_dir.empty()) opts.persist_dir = persist_dir;
      SessionManager sessions(opts);
      httplib::Server server;
      service::mount(server, sessions);
      std::cerr << "listening on " << host << ':' << chosen << '\n';
      if (!server.listen(host, chosen)) throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(chosen));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
