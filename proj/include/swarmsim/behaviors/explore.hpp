#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "swarmsim/behaviors/params.hpp"
#include "swarmsim/core/sensing.hpp"

namespace swarmsim {

struct ControlOutput {
  WheelCommand command;
  ControllerState controller;
};

/// Proximity rays count only when they point strictly ahead of the body axis
/// (|angle| < 90 degrees). Side and rear readings belong to walls being slid
/// past or moved away from; counting them traps robots in corners.
[[nodiscard]] inline bool in_front_half(double bearing) {
  return std::abs(bearing) < std::numbers::pi / 2.0 - 1e-9;
}

/// A neighbour is in the way when it lies ahead inside the corridor swept by
/// the body, i.e. its lateral offset is below one robot diameter.
[[nodiscard]] inline bool in_path(const NeighborReading &n, double corridor_width) {
  return std::cos(n.bearing) > 0 && std::abs(n.range * std::sin(n.bearing)) < corridor_width;
}

/// Sum of unit vectors toward the triggering stimuli. Triggers: a wall within
/// proximity range ahead, or a neighbour in the way closer than the
/// separation distance.
[[nodiscard]] inline Vec2 obstacle_stimulus(const SenseFrame &sense, double separation, double corridor_width,
                                            bool &triggered) {
  Vec2 sum;
  triggered = false;
  for (const auto &p : sense.proximity) {
    if (p.distance && in_front_half(p.angle)) {
      sum += Vec2::unit(p.angle);
      triggered = true;
    }
  }
  for (const auto &n : sense.neighbors) {
    if (n.range < separation && in_path(n, corridor_width)) {
      sum += Vec2::unit(n.bearing);
      triggered = true;
    }
  }
  return sum;
}

/// Number of rotation ticks for a turn angle drawn uniformly from the
/// configured range. At least one tick.
[[nodiscard]] inline int draw_rotation_ticks(const BehaviorParams &params, const WorldConstants &wc,
                                             RandomStream &rng) {
  const double angle = rng.uniform(params.turn.min_angle, params.turn.max_angle);
  const double per_tick = wc.angular_speed * wc.tick_duration;
  return std::max(1, static_cast<int>(std::lround(angle / per_tick)));
}

/// Ballistic motion: straight at v, rotate on the spot for a random duration
/// on encountering a wall or a robot in the way closer than d. Obstacles on
/// the right turn the robot left and vice versa; dead-ahead picks a side at
/// random.
[[nodiscard]] inline ControlOutput explore_step(const SenseFrame &sense, ControllerState ctl,
                                                const BehaviorParams &params, const WorldConstants &wc,
                                                RandomStream &rng) {
  if (ctl.rotate_ticks_remaining > 0) {
    --ctl.rotate_ticks_remaining;
    return {WheelCommand::rotate(ctl.rotate_direction, wc.angular_speed), ctl};
  }
  bool triggered = false;
  const Vec2 stimulus = obstacle_stimulus(sense, params.separation, wc.robot_diameter, triggered);
  if (!triggered) {
    ctl.rotate_direction = Turn::none;
    return {WheelCommand::forward(params.speed), ctl};
  }
  if (stimulus.y > 1e-9) {
    ctl.rotate_direction = Turn::right;
  } else if (stimulus.y < -1e-9) {
    ctl.rotate_direction = Turn::left;
  } else {
    ctl.rotate_direction = rng.coin() ? Turn::left : Turn::right;
  }
  // this tick is the first rotation tick
  ctl.rotate_ticks_remaining = draw_rotation_ticks(params, wc, rng) - 1;
  return {WheelCommand::rotate(ctl.rotate_direction, wc.angular_speed), ctl};
}

}  // namespace swarmsim
