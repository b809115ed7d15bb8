#pragma once

#include <algorithm>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "swarmsim/core/world.hpp"

namespace swarmsim {

struct NeighborReading {
  int id = 0;
  double range = 0.0;    // cm, centre to centre
  double bearing = 0.0;  // rad, body frame, [-pi, pi)
};

struct ProximityReading {
  double angle = 0.0;              // body frame
  std::optional<double> distance;  // gap from the body surface; empty = clear
};

struct SenseFrame {
  int robot_id = 0;
  Pose self;  // robots know their global position
  std::vector<ProximityReading> proximity;
  std::vector<NeighborReading> neighbors;
  bool in_target = false;
  std::vector<Message> inbox;
};

/// Body-frame angle of proximity sensor `k`, evenly spaced starting dead ahead.
[[nodiscard]] inline double proximity_sensor_angle(int k, int count) {
  return wrap_angle(2.0 * std::numbers::pi * k / count);
}

/// Free distance from the body surface of a robot centred at `origin` to the
/// arena wall along `direction`. Other robots are not seen by the proximity
/// rays; they are sensed through range and bearing.
[[nodiscard]] inline double wall_gap(const WorldState &w, Vec2 origin, Vec2 direction) {
  const double side = w.constants.arena_side;
  double t = std::numeric_limits<double>::infinity();
  if (direction.x > 0) t = std::min(t, (side - origin.x) / direction.x);
  if (direction.x < 0) t = std::min(t, -origin.x / direction.x);
  if (direction.y > 0) t = std::min(t, (side - origin.y) / direction.y);
  if (direction.y < 0) t = std::min(t, -origin.y / direction.y);
  return std::max(0.0, t - w.constants.robot_radius());
}

[[nodiscard]] inline std::vector<NeighborReading> neighbors_of(const WorldState &w, int id) {
  std::vector<NeighborReading> out;
  const auto &me = w.robots[static_cast<std::size_t>(id)];
  for (const auto &other : w.robots) {
    if (other.id == id) continue;
    const Vec2 rel = other.pose.position - me.pose.position;
    // hypot(-x, -y) == hypot(x, y), so the relation is exactly symmetric
    const double range = rel.norm();
    if (range <= w.constants.comm_range)
      out.push_back({other.id, range, wrap_angle(rel.angle() - me.pose.heading)});
  }
  return out;
}

[[nodiscard]] inline bool in_target(const WorldState &w, Vec2 p) {
  return w.target_visible() && w.target.contains(p);
}

[[nodiscard]] inline SenseFrame sense(const WorldState &w, int robot_id) {
  if (robot_id < 0 || static_cast<std::size_t>(robot_id) >= w.robots.size())
    throw std::out_of_range("robot id");
  const auto &me = w.robots[static_cast<std::size_t>(robot_id)];
  SenseFrame f;
  f.robot_id = robot_id;
  f.self = me.pose;
  const int n = w.constants.proximity_sensor_count;
  f.proximity.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double a = proximity_sensor_angle(k, n);
    const double gap = wall_gap(w, me.pose.position, Vec2::unit(me.pose.heading + a));
    ProximityReading reading{a, std::nullopt};
    if (gap <= w.constants.proximity_range) reading.distance = gap;
    f.proximity.push_back(reading);
  }
  f.neighbors = neighbors_of(w, robot_id);
  f.in_target = in_target(w, me.pose.position);
  f.inbox = w.inboxes[static_cast<std::size_t>(robot_id)];
  return f;
}

[[nodiscard]] inline std::vector<SenseFrame> sense_all(const WorldState &w) {
  std::vector<SenseFrame> frames;
  frames.reserve(w.robots.size());
  for (const auto &r : w.robots) frames.push_back(sense(w, r.id));
  return frames;
}

}  // namespace swarmsim
