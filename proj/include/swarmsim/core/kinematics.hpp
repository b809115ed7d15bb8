#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>

#include "swarmsim/core/world.hpp"

namespace swarmsim {

namespace detail {

inline void clamp_to_arena(WorldState &w) {
  const double lo = w.constants.robot_radius();
  const double hi = w.constants.arena_side - lo;
  for (auto &r : w.robots) {
    r.pose.position.x = std::clamp(r.pose.position.x, lo, hi);
    r.pose.position.y = std::clamp(r.pose.position.y, lo, hi);
  }
}

/// One sweep of symmetric pair separation; returns the largest overlap seen.
inline double separate_pairs(WorldState &w) {
  const double dmin = w.constants.robot_diameter;
  double worst = 0.0;
  auto &rs = w.robots;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    for (std::size_t j = i + 1; j < rs.size(); ++j) {
      Vec2 rel = rs[j].pose.position - rs[i].pose.position;
      double dist = rel.norm();
      const double overlap = dmin - dist;
      if (overlap <= 0) continue;
      worst = std::max(worst, overlap);
      Vec2 axis;
      if (dist > 1e-12) {
        axis = (1.0 / dist) * rel;
      } else {
        // coincident centres: split along the lower id's heading
        axis = Vec2::unit(rs[i].pose.heading);
      }
      const Vec2 push = (overlap / 2.0) * axis;
      rs[i].pose.position -= push;
      rs[j].pose.position += push;
    }
  }
  return worst;
}

}  // namespace detail

/// Projects positions back into a valid configuration: inside the walls and
/// without interpenetration beyond floating-point residue.
inline void resolve_collisions(WorldState &w) {
  constexpr int kMaxSweeps = 200;
  detail::clamp_to_arena(w);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const double worst = detail::separate_pairs(w);
    detail::clamp_to_arena(w);
    if (worst <= 1e-9) break;
  }
}

/// Integrates one tick of unicycle motion for every robot, resolves
/// collisions and advances the clock.
inline void step_kinematics(WorldState &w, std::span<const WheelCommand> commands) {
  if (commands.size() != w.robots.size()) throw std::invalid_argument("one command per robot");
  const double dt = w.constants.tick_duration;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    auto &r = w.robots[i];
    const auto &c = commands[i];
    r.linear_speed = c.linear_speed;
    r.turn_command = c.angular_rate > 0 ? Turn::left : c.angular_rate < 0 ? Turn::right : Turn::none;
    r.pose.position += (dt * c.linear_speed) * Vec2::unit(r.pose.heading);
    r.pose.heading = wrap_angle(r.pose.heading + dt * c.angular_rate);
  }
  resolve_collisions(w);
  ++w.clock;
}

}  // namespace swarmsim
