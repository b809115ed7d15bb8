#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace swarmsim {

/// Simulation time as a whole number of fixed ticks. The clock never holds a
/// fractional tick, so all time comparisons are exact.
struct Ticks {
  std::int64_t count = 0;

  friend constexpr auto operator<=>(Ticks, Ticks) = default;
  friend constexpr Ticks operator+(Ticks a, Ticks b) { return {a.count + b.count}; }
  friend constexpr Ticks operator-(Ticks a, Ticks b) { return {a.count - b.count}; }
  constexpr Ticks &operator++() {
    ++count;
    return *this;
  }
};

/// Fixed physical constants of the arena, robots and sensors.
struct WorldConstants {
  double arena_side = 150.0;       // cm
  double robot_diameter = 7.0;     // cm
  double comm_range = 36.0;        // cm, centre to centre
  double proximity_range = 10.0;   // cm, from the body surface
  int proximity_sensor_count = 8;
  double target_radius = 25.0;     // cm
  double target_appear_time = 3.0; // s
  int swarm_size = 10;
  double tick_duration = 0.1;          // s
  double angular_speed = std::numbers::pi;  // rad/s, rotation in place
  double overlap_tolerance = 0.1;      // cm

  [[nodiscard]] double robot_radius() const { return robot_diameter / 2.0; }

  friend bool operator==(const WorldConstants &, const WorldConstants &) = default;

  /// Durations are rounded to whole ticks.
  [[nodiscard]] Ticks to_ticks(double seconds) const {
    return {static_cast<std::int64_t>(std::llround(seconds / tick_duration))};
  }
  [[nodiscard]] double to_seconds(Ticks t) const {
    return static_cast<double>(t.count) * tick_duration;
  }
  [[nodiscard]] Ticks target_appear_tick() const { return to_ticks(target_appear_time); }

  void validate() const {
    if (!(arena_side > 0 && robot_diameter > 0 && comm_range > 0 && proximity_range > 0 &&
          proximity_sensor_count > 0 && target_radius > 0 && target_appear_time >= 0 &&
          swarm_size > 0 && tick_duration > 0 && angular_speed > 0 && overlap_tolerance >= 0))
      throw std::invalid_argument("world constants must be positive");
    if (!(comm_range > robot_diameter))
      throw std::invalid_argument("comm_range must exceed robot_diameter");
    if (!(target_radius < arena_side / 2.0))
      throw std::invalid_argument("target region does not fit inside the arena");
  }
};

}  // namespace swarmsim
