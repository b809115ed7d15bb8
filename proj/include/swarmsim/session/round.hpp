#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "swarmsim/session/protocol.hpp"
#include "swarmsim/simulation.hpp"

namespace swarmsim::session {

struct SnapshotOptions {
  // When set, the target stays hidden from the operator until their own robot
  // knows it, instead of from the moment it appears.
  bool hide_target_until_informed = false;
};

namespace detail {
// divides by the inverse step so 59.9 comes out as 59.9, not 59.900000000000006
inline double round_to(double x, double step) {
  const double inv = std::round(1.0 / step);
  return std::round(x * inv) / inv;
}
}  // namespace detail

/// World state as shown to the operator. Target coordinates never leave the
/// server before the target is visible.
[[nodiscard]] inline json snapshot_message(const WorldState &w, int round_index, int human_robot_id,
                                           Ticks time_limit, const SnapshotOptions &opt = {}) {
  const auto &wc = w.constants;
  json j;
  j["type"] = "snapshot";
  j["round_index"] = round_index;
  j["clock"] = detail::round_to(w.time(), 0.1);
  const Ticks left = w.clock < time_limit ? time_limit - w.clock : Ticks{0};
  j["remaining"] = detail::round_to(wc.to_seconds(left), 0.1);
  j["comm_range"] = wc.comm_range;
  j["robot_radius"] = wc.robot_radius();
  auto robots = json::array();
  for (const auto &r : w.robots) {
    robots.push_back({{"id", r.id},
                      {"x", detail::round_to(r.pose.position.x, 0.01)},
                      {"y", detail::round_to(r.pose.position.y, 0.01)},
                      {"heading", detail::round_to(r.pose.heading, 0.001)},
                      {"mode", to_string(r.mode)},
                      {"is_human", r.id == human_robot_id}});
  }
  j["robots"] = std::move(robots);

  const auto &human = w.robots.at(static_cast<std::size_t>(human_robot_id));
  const bool show = w.target_visible() && (!opt.hide_target_until_informed || human.informed());
  json target{{"visible", show}, {"radius", w.target.radius}};
  if (show) {
    target["x"] = detail::round_to(w.target.center.x, 0.01);
    target["y"] = detail::round_to(w.target.center.y, 0.01);
  }
  j["target"] = std::move(target);
  j["human_informed"] = human.informed();
  return j;
}

struct RoundTick {
  json snapshot;
  std::vector<OperatorNotice> notices;
  bool finished = false;
};

/// One round of human-swarm play. Inputs are queued as they arrive and are
/// applied together at the start of the next tick: key edges fold into the
/// held-key state (the last edge per key wins) and button presses apply in
/// arrival order. Every applied input is logged with its tick so the round
/// can be replayed offline.
class RoundRunner {
 public:
  RoundRunner(const RoundSpec &spec, std::uint64_t seed, SnapshotOptions opt = {})
      : spec_(spec), seed_(seed), opt_(opt), world_(init_world(spec.config.world, seed)),
        limit_(spec.config.world.to_ticks(spec.time_limit)) {
    spec_.validate();
    world_.robots.at(static_cast<std::size_t>(spec.human_robot_id)).control = Control::human;
  }

  /// Snapshot of the initial state; counts as the first snapshot sent.
  [[nodiscard]] json start() {
    ++snapshots_;
    return snapshot_message(world_, spec_.round_index, spec_.human_robot_id, limit_, opt_);
  }

  void queue(const OperatorInput &in) { pending_.push_back(in); }

  RoundTick tick() {
    RoundTick out;
    if (finished()) {
      out.finished = true;
      return out;
    }
    HumanTickInput human;
    human.robot_id = spec_.human_robot_id;
    for (const auto &in : pending_) {
      log_.push_back({world_.clock.count, in});
      switch (in.kind) {
        case InputKind::key_down:
        case InputKind::key_up: {
          bool &held = *in.key == Key::left ? keys_.left : keys_.right;
          held = in.kind == InputKind::key_down;
          break;
        }
        case InputKind::share_target: human.commands.push_back(OperatorCommand::share_target); break;
        case InputKind::move_to_target: human.commands.push_back(OperatorCommand::move_to_target); break;
      }
    }
    pending_.clear();
    human.keys = keys_;
    auto report = advance(world_, spec_.config.params, &human);
    out.notices = std::move(report.notices);
    out.snapshot = snapshot_message(world_, spec_.round_index, spec_.human_robot_id, limit_, opt_);
    ++snapshots_;
    out.finished = finished();
    return out;
  }

  [[nodiscard]] bool finished() const { return world_.completed_at.has_value() || world_.clock >= limit_; }

  [[nodiscard]] RoundOutcome outcome() const {
    RoundOutcome o;
    o.round_index = spec_.round_index;
    o.seed = seed_;
    o.success = world_.completed_at.has_value() && *world_.completed_at <= limit_;
    if (o.success) o.completion_time = world_.constants.to_seconds(*world_.completed_at);
    o.input_log = log_;
    o.snapshot_count = snapshots_;
    return o;
  }

  [[nodiscard]] const WorldState &world() const { return world_; }
  [[nodiscard]] const RoundSpec &spec() const { return spec_; }
  [[nodiscard]] Ticks limit() const { return limit_; }

 private:
  RoundSpec spec_;
  std::uint64_t seed_;
  SnapshotOptions opt_;
  WorldState world_;
  Ticks limit_;
  HeldKeys keys_;
  std::vector<OperatorInput> pending_;
  std::vector<InputLogEntry> log_;
  std::size_t snapshots_ = 0;
};

/// Offline re-run of a round from its input log. Produces the same outcome
/// as the live round: the simulation is a pure function of the seed and the
/// tick-stamped inputs.
[[nodiscard]] inline RoundOutcome replay(const RoundSpec &spec, std::uint64_t seed,
                                         const std::vector<InputLogEntry> &input_log) {
  RoundRunner runner(spec, seed);
  (void)runner.start();
  std::size_t next = 0;
  while (!runner.finished()) {
    while (next < input_log.size() && input_log[next].tick <= runner.world().clock.count)
      runner.queue(input_log[next++].input);
    runner.tick();
  }
  return runner.outcome();
}

}  // namespace swarmsim::session
