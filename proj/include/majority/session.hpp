#pragma once

// Interactive game sessions behind the request/response service. Every
// action takes and returns a JSON document; errors carry a code and status.

#include <majority/adversary.hpp>
#include <majority/arena.hpp>
#include <majority/io.hpp>
#include <majority/model.hpp>
#include <majority/strategy.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>

namespace majority {

enum class SessionMode { human_vs_adversary, human_as_adversary, watch_solver };

constexpr std::string_view to_string(SessionMode m) {
  switch (m) {
    case SessionMode::human_vs_adversary: return "human_vs_adversary";
    case SessionMode::human_as_adversary: return "human_as_adversary";
    case SessionMode::watch_solver: return "watch_solver";
  }
  return "human_vs_adversary";
}

inline SessionMode session_mode_from_string(std::string_view s) {
  if (s == "human_vs_adversary") return SessionMode::human_vs_adversary;
  if (s == "human_as_adversary") return SessionMode::human_as_adversary;
  if (s == "watch_solver") return SessionMode::watch_solver;
  throw std::invalid_argument("unknown session mode: " + std::string(s));
}

class SessionError : public std::runtime_error {
 public:
  SessionError(int status, std::string code, const std::string& message, json detail = json::object())
      : std::runtime_error(message), status_(status), code_(std::move(code)), detail_(std::move(detail)) {}

  int status() const { return status_; }
  const std::string& code() const { return code_; }

  json body() const {
    json j = detail_;
    j["error"] = code_;
    j["message"] = what();
    return j;
  }

 private:
  int status_;
  std::string code_;
  json detail_;
};

/// Sessions larger than this are refused; snapshots run exact searches.
inline constexpr int kMaxSessionN = 12;
/// Feasible-set counts are included in snapshots up to this n.
inline constexpr int kFeasibleCountMaxN = 4;

struct SessionConfig {
  int n = 2;
  SessionMode mode = SessionMode::human_vs_adversary;
  std::string strategy = "optimal";
  std::uint64_t seed = 0;
  std::size_t cap = 64;
  std::optional<std::size_t> budget;
};

class Session {
 public:
  Session(std::string id, SessionConfig cfg) : id_(std::move(id)), cfg_(std::move(cfg)), knowledge_(cfg_.n) {
    transcript_.n = cfg_.n;
    // The transcript records the opponent kind, as arena transcripts do.
    transcript_.mode = cfg_.mode == SessionMode::human_as_adversary ? "human_adversary" : "adversary";
    if (cfg_.mode != SessionMode::human_as_adversary) adversary_.emplace(cfg_.n);
    if (cfg_.mode != SessionMode::human_vs_adversary)
      strategy_ = make_strategy(cfg_.strategy, cfg_.n, {cfg_.seed, cfg_.cap});
    if (cfg_.mode == SessionMode::human_as_adversary) advance_machine();
  }

  const std::string& id() const { return id_; }
  const SessionConfig& config() const { return cfg_; }
  const Transcript& transcript() const { return transcript_; }
  bool finished() const { return finished_; }
  std::mutex& mutex() { return mutex_; }

  json snapshot() const {
    json j{{"id", id_},
           {"n", cfg_.n},
           {"mode", to_string(cfg_.mode)},
           {"finished", finished_},
           {"comparisons", transcript_.comparisons()},
           {"budget", cfg_.n + 2}};
    const auto used = static_cast<long long>(transcript_.comparisons());
    j["remaining_budget"] = std::max(0LL, cfg_.n + 2 - used);
    if (strategy_) j["strategy"] = strategy_->name();
    if (strategy_) j["seed"] = cfg_.seed;
    if (adversary_) {
      j["adversary"] = snapshot_of(*adversary_);
      j["certificate"] = to_json(adversary_->certificate());
    }
    const KnowledgeState& k = adversary_ ? adversary_->knowledge() : knowledge_;
    if (cfg_.n <= kFeasibleCountMaxN) j["feasible_count"] = count_feasible(k);
    if (cfg_.mode == SessionMode::human_as_adversary) {
      j["pending_query"] = pending_ ? json{pending_->i, pending_->j} : json(nullptr);
      j["classes"] = k.classes();
      json neq = json::array();
      for (const auto& p : k.class_inequalities()) neq.push_back({p.i, p.j});
      j["class_inequalities"] = neq;
    }
    if (finished_) j["verdict"] = to_string(transcript_.verdict);
    return j;
  }

  json submit_query(int i, int j) {
    expect_mode(SessionMode::human_vs_adversary, "queries are only accepted when a human plays the algorithm");
    expect_running();
    check_pair(i, j);
    const Answer a = adversary_->respond(i, j);
    transcript_.queries.push_back({i, j, a});
    return {{"answer", to_string(a)}, {"comparisons", transcript_.comparisons()}, {"state", snapshot()}};
  }

  json submit_output(int position) {
    expect_mode(SessionMode::human_vs_adversary, "outputs are only accepted when a human plays the algorithm");
    expect_running();
    check_position(position);
    finish(position);
    json j{{"verdict", to_string(transcript_.verdict)}, {"transcript", transcript_}};
    j["witness"] = witness_ ? to_json(*witness_) : json(nullptr);
    return j;
  }

  /// Human adversary answers the machine's pending query. Answers that
  /// contradict earlier ones, or leave no valid instance, are rejected.
  json submit_answer(Answer a) {
    expect_mode(SessionMode::human_as_adversary, "answers are only accepted when a human plays the adversary");
    expect_running();
    if (!pending_) throw SessionError(409, "out_of_turn", "no query is pending");
    const QueryRecord r{pending_->i, pending_->j, a};
    KnowledgeState next = knowledge_;
    try {
      next.apply(r);
    } catch (const Contradiction&) {
      const auto conflict = conflicting_record(r);
      throw SessionError(422, "inconsistent_answer", "answer contradicts an earlier answer",
                         {{"conflict", json{conflict.i, conflict.j}}});
    }
    if (!is_realizable(next))
      throw SessionError(422, "inconsistent_answer", "no valid instance is consistent with this answer",
                         {{"conflict", nullptr}});
    knowledge_ = next;
    transcript_.queries.push_back(r);
    advance_machine();
    json j{{"consistent", true}, {"state", snapshot()}};
    j["next"] = move_json();
    if (finished_) j["transcript"] = transcript_;
    return j;
  }

  /// One machine move in a watched game.
  json step() {
    expect_mode(SessionMode::watch_solver, "steps are only accepted in watch mode");
    expect_running();
    const Move m = machine_move();
    json j;
    if (const auto* c = std::get_if<Claim>(&m)) {
      finish(c->position);
      j["move"] = {{"output", c->position}};
      j["verdict"] = to_string(transcript_.verdict);
      j["witness"] = witness_ ? to_json(*witness_) : json(nullptr);
    } else {
      const auto q = std::get<PositionPair>(m);
      check_pair(q.i, q.j);
      const Answer a = adversary_->respond(q.i, q.j);
      transcript_.queries.push_back({q.i, q.j, a});
      j["move"] = {{"query", {q.i, q.j}}, {"answer", to_string(a)}};
    }
    j["state"] = snapshot();
    return j;
  }

  /// Guarded by the owning manager's mutex.
  std::chrono::steady_clock::time_point last_used;

 private:
  static json snapshot_of(const AdversaryState& s) { return majority::snapshot(s); }

  void expect_mode(SessionMode m, const char* message) const {
    if (cfg_.mode != m) throw SessionError(409, "out_of_turn", message);
  }

  void expect_running() const {
    if (finished_) throw SessionError(409, "out_of_turn", "the game is over");
  }

  void check_position(int p) const {
    if (p < 0 || p >= 2 * cfg_.n) throw SessionError(400, "invalid_position", "position out of range");
  }

  void check_pair(int i, int j) const {
    check_position(i);
    check_position(j);
    if (i == j) throw SessionError(400, "invalid_position", "a position cannot be compared with itself");
  }

  Move machine_move() const {
    if (cfg_.budget && transcript_.comparisons() >= *cfg_.budget) {
      const Move m = strategy_->next(transcript_.queries);
      if (std::holds_alternative<Claim>(m)) return m;
      return Claim{strategy_->output_now(transcript_.queries)};
    }
    return strategy_->next(transcript_.queries);
  }

  void advance_machine() {
    const Move m = machine_move();
    if (const auto* c = std::get_if<Claim>(&m)) {
      pending_.reset();
      finish(c->position);
    } else {
      pending_ = std::get<PositionPair>(m);
    }
  }

  json move_json() const {
    if (pending_) return {{"query", {pending_->i, pending_->j}}};
    return {{"output", transcript_.output->position}};
  }

  void finish(int position) {
    check_position(position);
    transcript_.output = ClaimedOutput{position, std::nullopt};
    if (adversary_) {
      transcript_.verdict = defeat_check(*adversary_, transcript_);
      if (transcript_.verdict == Verdict::wrong) witness_ = extract_witness(*adversary_, position);
    } else {
      // The human adversary wins if their answers admit an instance where
      // the claim is not a majority position.
      const auto defeating = first_feasible_majority_set(knowledge_, bit(position));
      transcript_.verdict = defeating ? Verdict::wrong : Verdict::correct;
      if (defeating) witness_ = canonical_instance(*defeating);
    }
    finished_ = true;
  }

  // The earlier answer that a rejected answer collides with.
  PositionPair conflicting_record(const QueryRecord& r) const {
    const int ci = knowledge_.representative(r.i);
    const int cj = knowledge_.representative(r.j);
    for (const auto& q : transcript_.queries) {
      const int a = knowledge_.representative(q.i);
      const int b = knowledge_.representative(q.j);
      if (r.answer == Answer::equal && q.answer == Answer::not_equal && ((a == ci && b == cj) || (a == cj && b == ci)))
        return q.pair();
      if (r.answer == Answer::not_equal && q.answer == Answer::equal && a == ci && b == ci) return q.pair();
    }
    return r.pair();
  }

  std::string id_;
  SessionConfig cfg_;
  std::optional<AdversaryState> adversary_;
  std::unique_ptr<Strategy> strategy_;
  KnowledgeState knowledge_;
  std::optional<PositionPair> pending_;
  std::optional<Instance> witness_;
  Transcript transcript_;
  bool finished_ = false;
  std::mutex mutex_;
};

/// Live sessions keyed by id, expired after an idle timeout. Each session
/// handles one action at a time; a concurrent action on a busy session is
/// rejected with "busy".
class SessionManager {
 public:
  using Clock = std::chrono::steady_clock;

  struct Options {
    std::chrono::seconds idle_timeout{30 * 60};
    std::optional<std::filesystem::path> persist_dir;
    std::uint64_t seed = 0;
    std::function<Clock::time_point()> now = [] { return Clock::now(); };
  };

  SessionManager() : SessionManager(Options{}) {}
  explicit SessionManager(Options opts) : opts_(std::move(opts)), ids_(opts_.seed) {}

  json create(const json& request) {
    SessionConfig cfg;
    try {
      cfg.n = request.at("n").get<int>();
      cfg.mode = session_mode_from_string(request.value("mode", std::string("human_vs_adversary")));
      cfg.strategy = request.value("strategy", std::string("optimal"));
      cfg.seed = request.value("seed", std::uint64_t{0});
      cfg.cap = request.value("cap", std::size_t{64});
      if (request.contains("budget") && !request["budget"].is_null()) cfg.budget = request["budget"].get<std::size_t>();
    } catch (const std::exception& e) {
      throw SessionError(400, "bad_request", e.what());
    }
    if (cfg.n < 2 || cfg.n > kMaxSessionN) throw SessionError(400, "bad_request", "n must be between 2 and 12");
    std::shared_ptr<Session> s;
    try {
      s = std::make_shared<Session>(next_id(), cfg);
    } catch (const std::invalid_argument& e) {
      throw SessionError(400, "bad_request", e.what());
    }
    s->last_used = opts_.now();
    {
      std::lock_guard lock(mutex_);
      purge_locked();
      sessions_[s->id()] = s;
    }
    if (s->finished()) persist(*s);
    return {{"id", s->id()}, {"state", s->snapshot()}};
  }

  json query(const std::string& id, const json& request) {
    return act(id, [&](Session& s) { return s.submit_query(field<int>(request, "i"), field<int>(request, "j")); });
  }

  json answer(const std::string& id, const json& request) {
    return act(id, [&](Session& s) {
      Answer a;
      try {
        a = answer_from_string(field<std::string>(request, "answer"));
      } catch (const std::invalid_argument& e) {
        throw SessionError(400, "bad_request", e.what());
      }
      return s.submit_answer(a);
    });
  }

  json output(const std::string& id, const json& request) {
    return act(id, [&](Session& s) { return s.submit_output(field<int>(request, "position")); });
  }

  json step(const std::string& id) {
    return act(id, [](Session& s) { return s.step(); });
  }

  json state(const std::string& id) {
    return act(id, [](Session& s) { return s.snapshot(); });
  }

  json transcript(const std::string& id) {
    return act(id, [](Session& s) { return json(s.transcript()); });
  }

  std::size_t live_sessions() {
    std::lock_guard lock(mutex_);
    purge_locked();
    return sessions_.size();
  }

 private:
  template <class T>
  static T field(const json& request, const char* name) {
    try {
      return request.at(name).get<T>();
    } catch (const std::exception& e) {
      throw SessionError(400, "bad_request", std::string("missing or invalid field '") + name + "'");
    }
  }

  template <class F>
  json act(const std::string& id, F&& f) {
    std::shared_ptr<Session> s;
    {
      std::lock_guard lock(mutex_);
      purge_locked();
      auto it = sessions_.find(id);
      if (it == sessions_.end()) throw SessionError(404, "unknown_session", "no live session with id " + id);
      s = it->second;
      s->last_used = opts_.now();
    }
    std::unique_lock lock(s->mutex(), std::try_to_lock);
    if (!lock.owns_lock()) throw SessionError(423, "busy", "session is handling another action");
    const bool was_finished = s->finished();
    json out = f(*s);
    if (!was_finished && s->finished()) persist(*s);
    return out;
  }

  void purge_locked() {
    const auto now = opts_.now();
    std::erase_if(sessions_, [&](const auto& kv) { return now - kv.second->last_used > opts_.idle_timeout; });
  }

  std::string next_id() {
    std::lock_guard lock(mutex_);
    char buf[32];
    std::snprintf(buf, sizeof buf, "s%llu-%08llx", static_cast<unsigned long long>(++counter_),
                  static_cast<unsigned long long>(ids_() & 0xffffffffULL));
    return buf;
  }

  void persist(const Session& s) const {
    if (!opts_.persist_dir) return;
    std::filesystem::create_directories(*opts_.persist_dir);
    std::ofstream out(*opts_.persist_dir / (s.id() + ".json"));
    out << json(s.transcript()).dump(2) << '\n';
  }

  Options opts_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mt19937_64 ids_;
  std::uint64_t counter_ = 0;
};

}  // namespace majority
