#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "swarmsim/session/round.hpp"
#include "swarmsim/session/store.hpp"

namespace swarmsim::session {

enum class Phase { awaiting_ready, running, awaiting_rating, done };

[[nodiscard]] inline std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::awaiting_ready: return "awaiting_ready";
    case Phase::running: return "running";
    case Phase::awaiting_rating: return "awaiting_rating";
    case Phase::done: return "done";
  }
  return "?";
}

/// A message for the client. Snapshots may be dropped under back-pressure;
/// everything else must be delivered.
struct Outbound {
  std::string text;
  bool droppable = false;
};

struct SessionOptions {
  SnapshotOptions snapshot;
  std::chrono::milliseconds tick_period{100};
  std::function<std::string()> now = utc_timestamp;
};

/// Inter-snapshot timing of one round, measured against the tick period.
struct TickTiming {
  std::size_t intervals = 0;
  double max_jitter_ms = 0.0;
  double mean_jitter_ms = 0.0;
  double max_interval_ms = 0.0;
};

/// Seed of the given attempt at a round; a restart never reuses a seed.
[[nodiscard]] inline std::uint64_t attempt_seed(const RoundSpec &spec, int attempt) {
  return attempt == 0 ? spec.config.seed : derive_seed(spec.config.seed, static_cast<std::uint64_t>(attempt));
}

/// Transport-independent session controller. The network layer feeds it
/// connect / message / tick / disconnect events and sends what it returns.
class Session {
 public:
  /// Opens an existing session directory, recovering its state from the logs.
  Session(std::string id, SessionStore store, SessionOptions opt = {})
      : id_(std::move(id)), store_(std::move(store)), opt_(std::move(opt)) {
    plan_ = store_.load_plan();
    validate_plan(plan_);
    recover();
  }

  [[nodiscard]] const std::string &id() const { return id_; }
  [[nodiscard]] Phase phase() const { return phase_; }
  [[nodiscard]] bool running() const { return phase_ == Phase::running; }
  /// Position in the plan (0-based); equals plan size when done.
  [[nodiscard]] std::size_t current() const { return current_; }
  [[nodiscard]] int current_round_index() const {
    return current_ < plan_.size() ? plan_[current_].round_index : 0;
  }
  [[nodiscard]] int attempt() const { return attempt_; }
  [[nodiscard]] const std::vector<RoundSpec> &plan() const { return plan_; }
  [[nodiscard]] const SessionStore &store() const { return store_; }
  [[nodiscard]] const std::optional<TickTiming> &last_timing() const { return last_timing_; }
  [[nodiscard]] const RoundRunner *runner() const { return runner_ ? &*runner_ : nullptr; }

  std::vector<Outbound> on_connect() {
    std::vector<Outbound> out;
    switch (phase_) {
      case Phase::awaiting_ready: send(out, round_start_message(current_round_index(), plan_[current_].time_limit)); break;
      case Phase::awaiting_rating:
        send(out, round_end_message(*finished_));
        send(out, notice_message("rating_required", fmt::format("Rate round {} to continue.", finished_->round_index)));
        break;
      case Phase::done: send(out, notice_message("session_complete", "All rounds are complete.")); break;
      case Phase::running: break;  // a live round has no second client
    }
    return out;
  }

  std::vector<Outbound> on_message(std::string_view text) {
    std::vector<Outbound> out;
    const json msg = json::parse(text, nullptr, false);
    if (msg.is_discarded() || !msg.is_object()) {
      send(out, notice_message("bad_message", "Message is not a JSON object."));
      return out;
    }
    const auto type = msg.value("type", std::string{});
    try {
      if (type == "ready") {
        on_ready(out);
      } else if (type == "input") {
        on_input(msg, out);
      } else if (type == "rating") {
        on_rating(msg, out);
      } else {
        send(out, notice_message("bad_message", "Unknown message type '" + type + "'."));
      }
    } catch (const ProtocolError &e) {
      store_.append_event({{"event", "bad_message"}, {"error", e.what()}});
      send(out, notice_message("bad_message", e.what()));
    }
    return out;
  }

  /// Advances the running round by one tick. `wall` is the time the tick
  /// fired, used only for the jitter measurement.
  std::vector<Outbound> on_tick(std::chrono::steady_clock::time_point wall = std::chrono::steady_clock::now()) {
    std::vector<Outbound> out;
    if (phase_ != Phase::running) return out;
    measure(wall);
    auto t = runner_->tick();
    for (const auto &n : t.notices) send(out, notice_message(n.code, n.text));
    send(out, t.snapshot, true);
    if (t.finished) finish_round(out);
    return out;
  }

  /// A disconnect aborts a running round; the partial round is logged and the
  /// next attempt starts with a fresh seed.
  void on_disconnect() {
    if (phase_ != Phase::running) return;
    json ev{{"event", "round_aborted"},
            {"round_index", current_round_index()},
            {"attempt", attempt_},
            {"seed", runner_->outcome().seed},
            {"reason", "disconnect"},
            {"ticks", runner_->world().clock.count}};
    ev["inputs"] = input_log_to_json(runner_->outcome().input_log);
    store_.append_event(ev);
    log_timing("aborted");
    runner_.reset();
    ++attempt_;
    phase_ = Phase::awaiting_ready;
  }

  [[nodiscard]] json export_bundle() const {
    json plan = json::array();
    for (const auto &r : plan_) plan.push_back(to_json(r));
    json outcomes = json::array();
    for (const auto &o : store_.load_outcomes()) {
      json j{{"round_index", o.round_index}, {"seed", o.seed}, {"success", o.success}};
      j["completion_s"] = o.completion_time ? json(*o.completion_time) : json(nullptr);
      j["snapshot_count"] = o.snapshot_count;
      j["input_log"] = input_log_to_json(o.input_log);
      outcomes.push_back(std::move(j));
    }
    json ratings = json::array();
    for (const auto &r : store_.load_ratings()) ratings.push_back(to_json(r));
    json aborted = json::array();
    for (const auto &ev : store_.read("events.jsonl"))
      if (ev.value("event", "") == "round_aborted") aborted.push_back(ev);
    return {{"session_id", id_},       {"phase", to_string(phase_)}, {"plan", std::move(plan)},
            {"outcomes", std::move(outcomes)}, {"ratings", std::move(ratings)}, {"aborted_rounds", std::move(aborted)}};
  }

 private:
  void send(std::vector<Outbound> &out, const json &msg, bool droppable = false) const {
    out.push_back({msg.dump(), droppable});
  }

  void recover() {
    std::set<int> rated;
    for (const auto &r : store_.load_ratings()) rated.insert(r.round_index);
    std::map<int, RoundOutcome> finished;
    for (auto &o : store_.load_outcomes()) finished[o.round_index] = std::move(o);
    std::map<int, int> starts;
    for (const auto &ev : store_.read("events.jsonl"))
      if (ev.value("event", "") == "round_started") ++starts[ev.at("round_index").get<int>()];

    current_ = 0;
    while (current_ < plan_.size() && rated.contains(plan_[current_].round_index)) ++current_;
    if (current_ == plan_.size()) {
      phase_ = Phase::done;
      return;
    }
    const int index = plan_[current_].round_index;
    attempt_ = starts[index];
    if (auto it = finished.find(index); it != finished.end()) {
      finished_ = it->second;
      phase_ = Phase::awaiting_rating;
    } else {
      // a round that started but left no outcome was interrupted
      phase_ = Phase::awaiting_ready;
    }
  }

  void on_ready(std::vector<Outbound> &out) {
    if (phase_ != Phase::awaiting_ready) {
      send(out, notice_message("not_ready", fmt::format("Cannot start a round while {}.", to_string(phase_))));
      return;
    }
    const auto &spec = plan_[current_];
    const auto seed = attempt_seed(spec, attempt_);
    store_.append_event(
        {{"event", "round_started"}, {"round_index", spec.round_index}, {"attempt", attempt_}, {"seed", seed}});
    runner_.emplace(spec, seed, opt_.snapshot);
    phase_ = Phase::running;
    last_wall_.reset();
    timing_ = {};
    send(out, runner_->start(), true);
  }

  void on_input(const json &msg, std::vector<Outbound> &) {
    const auto in = input_from_json(msg);
    const char *reason = nullptr;
    if (phase_ != Phase::running) reason = "no_round_running";
    else if (in.round_index && *in.round_index != current_round_index()) reason = "wrong_round";
    if (reason) {
      json ev{{"event", "input_ignored"}, {"reason", reason}, {"current_round", current_round_index()}};
      ev["input"] = to_json(in);
      store_.append_event(ev);
      return;
    }
    runner_->queue(in);
  }

  void on_rating(const json &msg, std::vector<Outbound> &out) {
    RatingRecord r;
    try {
      r = rating_from_json(msg);
    } catch (const ProtocolError &e) {
      send(out, notice_message("rating_invalid", e.what()));
      return;
    }
    std::set<int> rated;
    for (const auto &prev : store_.load_ratings()) rated.insert(prev.round_index);
    if (rated.contains(r.round_index)) {
      send(out, notice_message("rating_conflict", fmt::format("Round {} is already rated.", r.round_index)));
      return;
    }
    if (phase_ != Phase::awaiting_rating || r.round_index != finished_->round_index) {
      send(out, notice_message("rating_not_allowed", fmt::format("Round {} is not awaiting a rating.", r.round_index)));
      return;
    }
    if (!r.session_id.empty() && r.session_id != id_) {
      send(out, notice_message("rating_invalid", "Rating is for a different session."));
      return;
    }
    if (!r.in_range()) {
      send(out, notice_message("rating_invalid", "Ratings must be integers from 1 to 7."));
      return;
    }
    r.session_id = id_;
    r.config_id = plan_[current_].config.config_id;
    r.submitted_at = opt_.now();
    store_.append_rating(r);
    send(out, notice_message("rating_accepted", fmt::format("Rating for round {} saved.", r.round_index)));

    finished_.reset();
    ++current_;
    attempt_ = 0;
    if (current_ == plan_.size()) {
      phase_ = Phase::done;
      send(out, notice_message("session_complete", "All rounds are complete."));
    } else {
      phase_ = Phase::awaiting_ready;
      send(out, round_start_message(current_round_index(), plan_[current_].time_limit));
    }
  }

  void finish_round(std::vector<Outbound> &out) {
    const auto o = runner_->outcome();
    store_.append_outcome(o, plan_[current_].config.config_id, attempt_, opt_.now());
    log_timing("finished");
    finished_ = o;
    runner_.reset();
    phase_ = Phase::awaiting_rating;
    send(out, round_end_message(o));
  }

  void measure(std::chrono::steady_clock::time_point wall) {
    if (last_wall_) {
      const double interval = std::chrono::duration<double, std::milli>(wall - *last_wall_).count();
      const double jitter = std::abs(interval - static_cast<double>(opt_.tick_period.count()));
      ++timing_.intervals;
      timing_.max_jitter_ms = std::max(timing_.max_jitter_ms, jitter);
      timing_.max_interval_ms = std::max(timing_.max_interval_ms, interval);
      timing_.mean_jitter_ms += (jitter - timing_.mean_jitter_ms) / static_cast<double>(timing_.intervals);
    }
    last_wall_ = wall;
  }

  void log_timing(const char *how) {
    last_timing_ = timing_;
    store_.append_event({{"event", "tick_timing"},
                         {"round_index", current_round_index()},
                         {"attempt", attempt_},
                         {"round", how},
                         {"intervals", timing_.intervals},
                         {"max_jitter_ms", timing_.max_jitter_ms},
                         {"mean_jitter_ms", timing_.mean_jitter_ms},
                         {"max_interval_ms", timing_.max_interval_ms}});
  }

  std::string id_;
  SessionStore store_;
  SessionOptions opt_;
  std::vector<RoundSpec> plan_;
  Phase phase_ = Phase::awaiting_ready;
  std::size_t current_ = 0;
  int attempt_ = 0;
  std::optional<RoundRunner> runner_;
  std::optional<RoundOutcome> finished_;
  std::optional<std::chrono::steady_clock::time_point> last_wall_;
  TickTiming timing_;
  std::optional<TickTiming> last_timing_;
};

/// A team available for study sessions.
struct TeamEntry {
  int config_id = -1;
  double speed = 0;
  double separation = 0;
  double broadcast = 0;
  std::string group_label;
};

[[nodiscard]] inline std::vector<TeamEntry> teams_from_json(const json &j) {
  if (!j.is_array()) throw ProtocolError("teams file must be a JSON array");
  std::vector<TeamEntry> teams;
  try {
    for (const auto &t : j)
      teams.push_back({t.at("config_id").get<int>(), t.at("speed").get<double>(), t.at("separation").get<double>(),
                       t.at("broadcast").get<double>(), t.at("group_label").get<std::string>()});
  } catch (const nlohmann::json::exception &e) {
    throw ProtocolError(std::string("malformed teams file: ") + e.what());
  }
  return teams;
}

/// Study plan: `per_group` teams drawn without replacement from every group,
/// served in shuffled order, one randomly chosen human robot per round.
[[nodiscard]] inline std::vector<RoundSpec> study_plan(const std::vector<TeamEntry> &teams, std::uint64_t seed,
                                                       int per_group = 5, double time_limit = 60.0) {
  std::map<std::string, std::vector<TeamEntry>> groups;
  for (const auto &t : teams) groups[t.group_label].push_back(t);
  if (groups.empty()) throw ProtocolError("no teams available");
  RandomStream rng(seed);
  auto shuffle = [&rng](auto &v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
  };
  std::vector<TeamEntry> picked;
  for (auto &[label, members] : groups) {
    if (members.size() < static_cast<std::size_t>(per_group))
      throw ProtocolError(fmt::format("group '{}' has {} teams, need {}", label, members.size(), per_group));
    shuffle(members);
    picked.insert(picked.end(), members.begin(), members.begin() + per_group);
  }
  shuffle(picked);
  std::vector<RoundSpec> plan;
  for (std::size_t i = 0; i < picked.size(); ++i) {
    RoundSpec r;
    r.round_index = static_cast<int>(i) + 1;
    r.config.config_id = picked[i].config_id;
    r.config.params.speed = picked[i].speed;
    r.config.params.separation = picked[i].separation;
    r.config.params.broadcast = picked[i].broadcast;
    r.config.seed = derive_seed(seed, i + 1);
    r.config.max_trial_duration = time_limit;
    r.time_limit = time_limit;
    r.human_robot_id = static_cast<int>(rng.below(static_cast<std::uint64_t>(r.config.world.swarm_size)));
    plan.push_back(r);
  }
  return plan;
}

/// Owns every session under a data directory; sessions live in
/// `<data_dir>/<id>/` and are reopened from disk on demand.
class SessionManager {
 public:
  SessionManager(std::filesystem::path data_dir, std::vector<TeamEntry> teams = {}, SessionOptions opt = {})
      : data_dir_(std::move(data_dir)), teams_(std::move(teams)), opt_(std::move(opt)) {
    std::filesystem::create_directories(data_dir_);
  }

  /// Body of `POST /sessions`: either `{"rounds": [...]}` / a bare round
  /// array, or `{"mode": "study", "seed": S}`.
  std::string create(const json &body) {
    std::vector<RoundSpec> plan;
    if (body.is_object() && body.value("mode", "") == "study") {
      if (!body.contains("seed") || !body.at("seed").is_number_integer())
        throw ProtocolError("study mode needs an integer seed");
      plan = study_plan(teams_, body.at("seed").get<std::uint64_t>());
    } else {
      const json &rounds = body.is_array() ? body : body.value("rounds", json::array());
      if (!rounds.is_array()) throw ProtocolError("rounds must be an array");
      for (const auto &r : rounds) plan.push_back(round_from_json(r));
    }
    return create(plan);
  }

  std::string create(const std::vector<RoundSpec> &plan) {
    validate_plan(plan);
    std::string id;
    do {
      id = fmt::format("{:016x}", id_rng_());
    } while (std::filesystem::exists(data_dir_ / id));
    SessionStore(data_dir_ / id).create(id, plan);
    return id;
  }

  /// The session, loaded from disk if needed; null when unknown.
  Session *find(const std::string &id) {
    if (auto it = sessions_.find(id); it != sessions_.end()) return it->second.get();
    if (id.empty() || id.find_first_not_of("0123456789abcdef") != std::string::npos) return nullptr;
    SessionStore store(data_dir_ / id);
    if (!store.exists()) return nullptr;
    auto [it, _] = sessions_.emplace(id, std::make_unique<Session>(id, store, opt_));
    return it->second.get();
  }

  [[nodiscard]] const std::filesystem::path &data_dir() const { return data_dir_; }

 private:
  std::filesystem::path data_dir_;
  std::vector<TeamEntry> teams_;
  SessionOptions opt_;
  std::map<std::string, std::unique_ptr<Session>> sessions_;
  std::mt19937_64 id_rng_{std::random_device{}()};
};

}  // namespace swarmsim::session
