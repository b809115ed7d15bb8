#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "swarmsim/harness/config.hpp"
#include "swarmsim/simulation.hpp"

namespace swarmsim {

struct TrialResult {
  int config_id = -1;
  std::uint64_t seed = 0;
  std::optional<double> completion_time;            // s; empty = timeout
  std::vector<std::optional<double>> informed_at;   // s per robot
  std::vector<std::optional<double>> first_entry;   // s per robot
  std::uint64_t messages_delivered = 0;

  friend bool operator==(const TrialResult &, const TrialResult &) = default;
};

using TickObserver = std::function<void(const WorldState &)>;

/// Steps an already initialised world until completion or the time limit.
[[nodiscard]] inline TrialResult run_world(WorldState world, const SwarmConfig &config,
                                           const TickObserver &observer = {}) {
  const Ticks limit = world.constants.to_ticks(config.max_trial_duration);
  if (observer) observer(world);
  while (!world.completed_at && world.clock < limit) {
    advance(world, config.params);
    if (observer) observer(world);
  }
  TrialResult result;
  result.config_id = config.config_id;
  result.seed = config.seed;
  if (world.completed_at) result.completion_time = world.constants.to_seconds(*world.completed_at);
  for (const auto &r : world.robots) {
    result.informed_at.push_back(r.informed_at ? std::optional(world.constants.to_seconds(*r.informed_at))
                                               : std::nullopt);
  }
  for (const auto &e : world.first_entry)
    result.first_entry.push_back(e ? std::optional(world.constants.to_seconds(*e)) : std::nullopt);
  result.messages_delivered = world.messages_delivered;
  return result;
}

/// Fully autonomous trial; deterministic in (config, seed).
[[nodiscard]] inline TrialResult run_trial(const SwarmConfig &config, const TickObserver &observer = {}) {
  config.validate();
  return run_world(init_world(config.world, config.seed), config, observer);
}

/// One JSON line per tick: clock, robot poses and modes, and the target once
/// it has appeared.
[[nodiscard]] inline nlohmann::ordered_json trajectory_line(const WorldState &w) {
  nlohmann::ordered_json line;
  line["clock"] = w.time();
  auto robots = nlohmann::ordered_json::array();
  for (const auto &r : w.robots) {
    robots.push_back({{"id", r.id},
                      {"x", r.pose.position.x},
                      {"y", r.pose.position.y},
                      {"heading", r.pose.heading},
                      {"mode", to_string(r.mode)}});
  }
  line["robots"] = std::move(robots);
  if (w.target_visible())
    line["target"] = {{"x", w.target.center.x}, {"y", w.target.center.y}, {"radius", w.target.radius}};
  return line;
}

[[nodiscard]] inline TickObserver trajectory_writer(std::ostream &out) {
  return [&out](const WorldState &w) { out << trajectory_line(w).dump() << '\n'; };
}

}  // namespace swarmsim
