#pragma once

#include <array>
#include <numbers>
#include <stdexcept>

namespace swarmsim {

inline constexpr std::array<double, 5> kSpeedLevels{5.0, 7.5, 10.0, 12.5, 15.0};
inline constexpr std::array<double, 5> kSeparationLevels{4.0, 12.0, 20.0, 28.0, 36.0};
inline constexpr std::array<double, 5> kBroadcastLevels{0.0, 4.0, 8.0, 12.0, 16.0};

/// Virtual-force constants of the move-to-target flocking controller.
struct FlockingParams {
  double attraction_gain = 1.0;   // dimensionless, unit-vector scale
  double repulsion_gain = 50.0;   // scales (1/r - 1/r0)
  double repulsion_range = 14.0;  // cm
  double settle_radius = 5.0;     // cm, attraction off inside
  double heading_gain = 4.0;      // 1/s
  double max_turn_rate = std::numbers::pi;  // rad/s
};

/// Exploration turn angle on obstacle encounter, uniform in [min, max].
struct TurnParams {
  double min_angle = std::numbers::pi / 12.0;
  double max_angle = std::numbers::pi;
};

/// The three team parameters plus the controller constants.
struct BehaviorParams {
  double speed = 10.0;       // cm/s
  double separation = 20.0;  // cm
  double broadcast = 8.0;    // s
  FlockingParams flocking{};
  TurnParams turn{};

  void validate() const {
    if (!(speed > 0)) throw std::invalid_argument("speed must be positive");
    if (!(separation > 0)) throw std::invalid_argument("separation must be positive");
    if (!(broadcast >= 0)) throw std::invalid_argument("broadcast duration must be non-negative");
    if (!(turn.min_angle > 0 && turn.max_angle >= turn.min_angle))
      throw std::invalid_argument("turn angle range");
  }
};

}  // namespace swarmsim
