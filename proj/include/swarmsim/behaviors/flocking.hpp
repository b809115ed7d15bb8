#pragma once

#include <algorithm>
#include <cmath>

#include "swarmsim/behaviors/params.hpp"
#include "swarmsim/core/sensing.hpp"

namespace swarmsim {

/// World-frame virtual force on a robot heading for `target`: unit attraction
/// toward the target centre (off within the settle radius) plus
/// k_r * (1/r - 1/r0) repulsion from every neighbour closer than r0.
[[nodiscard]] inline Vec2 flocking_force(const SenseFrame &sense, Vec2 target, const FlockingParams &fp) {
  Vec2 force;
  const Vec2 to_target = target - sense.self.position;
  const double dist = to_target.norm();
  if (dist > fp.settle_radius) force += (fp.attraction_gain / dist) * to_target;
  for (const auto &n : sense.neighbors) {
    if (n.range >= fp.repulsion_range || n.range <= 0) continue;
    const double magnitude = fp.repulsion_gain * (1.0 / n.range - 1.0 / fp.repulsion_range);
    // bearing is body-relative; away = opposite of the neighbour direction
    force -= magnitude * Vec2::unit(sense.self.heading + n.bearing);
  }
  return force;
}

/// Potential-field convergence toward the known target. Turns toward the
/// force with a proportional, rate-capped heading controller and drives at
/// most v, slowing for weak forces and large heading errors.
[[nodiscard]] inline WheelCommand move_to_target_step(const SenseFrame &sense, const RobotState &robot,
                                                      const BehaviorParams &params) {
  if (!robot.known_target) return {};
  const auto &fp = params.flocking;
  const Vec2 force = flocking_force(sense, *robot.known_target, fp);
  const double magnitude = force.norm();
  if (magnitude < 1e-9) return {};
  const double error = wrap_angle(force.angle() - sense.self.heading);
  const double turn = std::clamp(fp.heading_gain * error, -fp.max_turn_rate, fp.max_turn_rate);
  const double speed = params.speed * std::min(1.0, magnitude) * std::max(0.0, std::cos(error));
  return {speed, turn};
}

}  // namespace swarmsim
