#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "swarmsim/core/constants.hpp"
#include "swarmsim/core/geometry.hpp"
#include "swarmsim/core/rng.hpp"

namespace swarmsim {

enum class Mode { explore, share_target, move_to_target };
enum class Turn { none, left, right };
enum class Control { autonomous, human };

[[nodiscard]] constexpr std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::explore: return "explore";
    case Mode::share_target: return "share_target";
    case Mode::move_to_target: return "move_to_target";
  }
  return "?";
}

/// Rotation bookkeeping of the explore controller.
struct ControllerState {
  int rotate_ticks_remaining = 0;
  Turn rotate_direction = Turn::none;

  friend bool operator==(const ControllerState &, const ControllerState &) = default;
};

struct RobotState {
  int id = 0;
  Pose pose;
  double linear_speed = 0.0;  // last commanded, cm/s
  Turn turn_command = Turn::none;
  Mode mode = Mode::explore;
  std::optional<Ticks> informed_at;
  std::optional<Ticks> broadcast_until;
  std::optional<Vec2> known_target;
  Control control = Control::autonomous;
  bool operator_sharing = false;  // human robot only
  ControllerState controller;

  [[nodiscard]] bool informed() const { return known_target.has_value(); }

  friend bool operator==(const RobotState &, const RobotState &) = default;
};

struct TargetRegion {
  Vec2 center;
  double radius = 25.0;
  Ticks appear_at;

  [[nodiscard]] bool contains(Vec2 p) const { return (p - center).norm2() <= radius * radius; }

  friend bool operator==(const TargetRegion &, const TargetRegion &) = default;
};

/// One delivered target-location message.
struct Message {
  int sender = 0;
  Vec2 target;

  friend bool operator==(const Message &, const Message &) = default;
};

struct WorldState {
  WorldConstants constants;
  Ticks clock;
  std::vector<RobotState> robots;
  TargetRegion target;
  std::vector<RandomStream> robot_rng;  // one independent stream per robot
  std::optional<Ticks> completed_at;
  /// Messages deposited during the previous tick, read at the next sense.
  std::vector<std::vector<Message>> inboxes;
  std::vector<std::optional<Ticks>> first_entry;
  std::uint64_t messages_delivered = 0;

  [[nodiscard]] double time() const { return constants.to_seconds(clock); }
  [[nodiscard]] bool target_visible() const { return clock >= target.appear_at; }
  [[nodiscard]] std::size_t size() const { return robots.size(); }

  friend bool operator==(const WorldState &, const WorldState &) = default;
};

/// Per-tick drive command of a differential-drive robot.
struct WheelCommand {
  double linear_speed = 0.0;   // cm/s
  double angular_rate = 0.0;   // rad/s, positive turns left

  static WheelCommand forward(double speed) { return {speed, 0.0}; }
  static WheelCommand rotate(Turn dir, double rate) {
    return {0.0, dir == Turn::left ? rate : dir == Turn::right ? -rate : 0.0};
  }

  friend bool operator==(const WheelCommand &, const WheelCommand &) = default;
};

inline constexpr std::uint64_t kTargetStream = 0x7a7a7a7a7a7a7a7aULL;

class PlacementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Builds the empty world frame (no robots) shared by init paths.
[[nodiscard]] inline WorldState make_empty_world(const WorldConstants &wc) {
  wc.validate();
  WorldState w;
  w.constants = wc;
  w.target.radius = wc.target_radius;
  w.target.appear_at = wc.target_appear_tick();
  return w;
}

/// Places the robots at explicit poses; used for scripted scenarios. Per-robot
/// random streams are still derived from `seed`.
[[nodiscard]] inline WorldState make_world(const WorldConstants &wc, std::uint64_t seed,
                                           const std::vector<Pose> &poses, Vec2 target_center) {
  WorldState w = make_empty_world(wc);
  w.target.center = target_center;
  const auto n = poses.size();
  w.robots.resize(n);
  w.robot_rng.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    w.robots[i].id = static_cast<int>(i);
    w.robots[i].pose = {poses[i].position, wrap_angle(poses[i].heading)};
    w.robot_rng.emplace_back(derive_seed(seed, i));
  }
  w.inboxes.assign(n, {});
  w.first_entry.assign(n, std::nullopt);
  return w;
}

/// Random initial world: non-overlapping uniform placement, uniform headings,
/// target centre uniform over the positions that keep the region inside the
/// arena. Identical seeds give identical worlds.
[[nodiscard]] inline WorldState init_world(const WorldConstants &wc, std::uint64_t seed) {
  constexpr int kMaxAttempts = 100000;
  WorldState w = make_empty_world(wc);
  const double r = wc.robot_radius();
  const auto n = static_cast<std::size_t>(wc.swarm_size);
  w.robots.resize(n);
  w.robot_rng.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RandomStream &rng = w.robot_rng.emplace_back(derive_seed(seed, i));
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      const Vec2 p{rng.uniform(r, wc.arena_side - r), rng.uniform(r, wc.arena_side - r)};
      placed = true;
      for (std::size_t j = 0; j < i; ++j) {
        if (distance(p, w.robots[j].pose.position) < wc.robot_diameter) {
          placed = false;
          break;
        }
      }
      if (placed) w.robots[i].pose.position = p;
    }
    if (!placed) throw PlacementError("could not place robot without overlap");
    w.robots[i].id = static_cast<int>(i);
    w.robots[i].pose.heading = wrap_angle(rng.uniform(-std::numbers::pi, std::numbers::pi));
  }
  RandomStream target_rng(derive_seed(seed, kTargetStream));
  const double lo = wc.target_radius;
  const double hi = wc.arena_side - wc.target_radius;
  w.target.center = {target_rng.uniform(lo, hi), target_rng.uniform(lo, hi)};
  w.inboxes.assign(n, {});
  w.first_entry.assign(n, std::nullopt);
  return w;
}

}  // namespace swarmsim
