#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "swarmsim/behaviors/human.hpp"
#include "swarmsim/harness/config.hpp"

namespace swarmsim::session {

using json = nlohmann::ordered_json;

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InputKind { key_down, key_up, share_target, move_to_target };
enum class Key { left, right };

struct OperatorInput {
  InputKind kind = InputKind::key_down;
  std::optional<Key> key;           // present iff kind is a key event
  double client_time_ms = 0.0;
  std::optional<int> round_index;   // optional guard against stale inputs

  [[nodiscard]] bool is_key_event() const { return kind == InputKind::key_down || kind == InputKind::key_up; }

  friend bool operator==(const OperatorInput &, const OperatorInput &) = default;
};

[[nodiscard]] inline std::string to_string(InputKind k) {
  switch (k) {
    case InputKind::key_down: return "key_down";
    case InputKind::key_up: return "key_up";
    case InputKind::share_target: return "share_target";
    case InputKind::move_to_target: return "move_to_target";
  }
  return "?";
}

[[nodiscard]] inline json to_json(const OperatorInput &in) {
  json j;
  j["kind"] = to_string(in.kind);
  if (in.key) j["key"] = *in.key == Key::left ? "left" : "right";
  j["client_time"] = in.client_time_ms;
  if (in.round_index) j["round_index"] = *in.round_index;
  return j;
}

[[nodiscard]] inline OperatorInput input_from_json(const json &j) {
  OperatorInput in;
  const auto kind = j.value("kind", std::string{});
  if (kind == "key_down") in.kind = InputKind::key_down;
  else if (kind == "key_up") in.kind = InputKind::key_up;
  else if (kind == "share_target") in.kind = InputKind::share_target;
  else if (kind == "move_to_target") in.kind = InputKind::move_to_target;
  else throw ProtocolError("unknown input kind '" + kind + "'");
  if (j.contains("key")) {
    const auto key = j.at("key").get<std::string>();
    if (key == "left") in.key = Key::left;
    else if (key == "right") in.key = Key::right;
    else throw ProtocolError("unknown key '" + key + "'");
  }
  if (in.is_key_event() != in.key.has_value())
    throw ProtocolError("key is required for key events and only for them");
  if (j.contains("client_time")) in.client_time_ms = j.at("client_time").get<double>();
  if (j.contains("round_index")) in.round_index = j.at("round_index").get<int>();
  return in;
}

/// One round of a session plan.
struct RoundSpec {
  int round_index = 1;
  SwarmConfig config;
  int human_robot_id = 0;
  double time_limit = 60.0;  // s

  void validate() const {
    config.validate();
    if (round_index < 1) throw ProtocolError("round_index must be >= 1");
    if (human_robot_id < 0 || human_robot_id >= config.world.swarm_size)
      throw ProtocolError("human_robot_id out of range");
    if (!(time_limit > 0)) throw ProtocolError("time_limit must be positive");
  }
};

[[nodiscard]] inline json to_json(const RoundSpec &r) {
  return {{"round_index", r.round_index},
          {"config_id", r.config.config_id},
          {"speed", r.config.params.speed},
          {"separation", r.config.params.separation},
          {"broadcast", r.config.params.broadcast},
          {"seed", r.config.seed},
          {"human_robot_id", r.human_robot_id},
          {"time_limit_s", r.time_limit}};
}

[[nodiscard]] inline RoundSpec round_from_json(const json &j) {
  try {
    RoundSpec r;
    r.round_index = j.at("round_index").get<int>();
    r.config.config_id = j.value("config_id", -1);
    r.config.params.speed = j.at("speed").get<double>();
    r.config.params.separation = j.at("separation").get<double>();
    r.config.params.broadcast = j.at("broadcast").get<double>();
    r.config.seed = j.value("seed", std::uint64_t{0});
    r.human_robot_id = j.value("human_robot_id", 0);
    r.time_limit = j.value("time_limit_s", 60.0);
    r.config.max_trial_duration = r.time_limit;
    return r;
  } catch (const nlohmann::json::exception &e) {
    throw ProtocolError(std::string("malformed round: ") + e.what());
  }
}

/// Plans are served in order; round indices must be 1, 2, ... N.
inline void validate_plan(const std::vector<RoundSpec> &plan) {
  if (plan.empty()) throw ProtocolError("round plan is empty");
  for (std::size_t i = 0; i < plan.size(); ++i) {
    try {
      plan[i].validate();
    } catch (const std::invalid_argument &e) {
      throw ProtocolError(e.what());
    }
    if (plan[i].round_index != static_cast<int>(i) + 1)
      throw ProtocolError("round indices must run 1..N in plan order");
  }
}

struct InputLogEntry {
  std::int64_t tick = 0;  // tick on which the input was applied
  OperatorInput input;

  friend bool operator==(const InputLogEntry &, const InputLogEntry &) = default;
};

struct RoundOutcome {
  int round_index = 0;
  std::uint64_t seed = 0;  // seed actually used (differs from the plan after a restart)
  bool success = false;
  std::optional<double> completion_time;
  std::vector<InputLogEntry> input_log;
  std::size_t snapshot_count = 0;

  friend bool operator==(const RoundOutcome &, const RoundOutcome &) = default;
};

[[nodiscard]] inline json input_log_to_json(const std::vector<InputLogEntry> &log) {
  json arr = json::array();
  for (const auto &e : log) {
    json entry{{"tick", e.tick}};
    entry["input"] = to_json(e.input);
    arr.push_back(std::move(entry));
  }
  return arr;
}

[[nodiscard]] inline std::vector<InputLogEntry> input_log_from_json(const json &arr) {
  std::vector<InputLogEntry> log;
  for (const auto &e : arr) log.push_back({e.at("tick").get<std::int64_t>(), input_from_json(e.at("input"))});
  return log;
}

struct RatingRecord {
  std::string session_id;
  int round_index = 0;
  int config_id = -1;
  int warmth = 0;
  int competence = 0;
  int joint_effort = 0;
  std::string submitted_at;

  [[nodiscard]] bool in_range() const {
    auto ok = [](int v) { return v >= 1 && v <= 7; };
    return ok(warmth) && ok(competence) && ok(joint_effort);
  }

  friend bool operator==(const RatingRecord &, const RatingRecord &) = default;
};

[[nodiscard]] inline json to_json(const RatingRecord &r) {
  return {{"session_id", r.session_id}, {"round_index", r.round_index}, {"config_id", r.config_id},
          {"warmth", r.warmth},         {"competence", r.competence},   {"joint_effort", r.joint_effort},
          {"submitted_at", r.submitted_at}};
}

[[nodiscard]] inline RatingRecord rating_from_json(const json &j) {
  try {
    RatingRecord r;
    r.session_id = j.value("session_id", std::string{});
    r.round_index = j.at("round_index").get<int>();
    r.config_id = j.value("config_id", -1);
    r.warmth = j.at("warmth").get<int>();
    r.competence = j.at("competence").get<int>();
    r.joint_effort = j.at("joint_effort").get<int>();
    r.submitted_at = j.value("submitted_at", std::string{});
    return r;
  } catch (const nlohmann::json::exception &e) {
    throw ProtocolError(std::string("malformed rating: ") + e.what());
  }
}

// Server -> client messages.

[[nodiscard]] inline json round_start_message(int round_index, double time_limit) {
  return {{"type", "round_start"}, {"round_index", round_index}, {"time_limit_s", time_limit}};
}

[[nodiscard]] inline json round_end_message(const RoundOutcome &o) {
  json j{{"type", "round_end"}, {"round_index", o.round_index}, {"success", o.success}};
  j["completion_s"] = o.completion_time ? json(*o.completion_time) : json(nullptr);
  return j;
}

[[nodiscard]] inline json notice_message(const std::string &code, const std::string &text) {
  return {{"type", "notice"}, {"code", code}, {"text", text}};
}

}  // namespace swarmsim::session
