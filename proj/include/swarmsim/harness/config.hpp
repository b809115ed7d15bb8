#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "swarmsim/behaviors/params.hpp"
#include "swarmsim/core/constants.hpp"

namespace swarmsim {

struct SwarmConfig {
  int config_id = -1;
  BehaviorParams params;
  std::uint64_t seed = 0;
  double max_trial_duration = 180.0;  // s
  WorldConstants world;

  void validate() const {
    params.validate();
    world.validate();
    if (!(max_trial_duration > world.target_appear_time))
      throw std::invalid_argument("max_trial_duration must exceed the target appearance time");
  }
};

/// One team configuration on the sweep grid.
struct GridPoint {
  int config_id = 0;
  double speed = 0;
  double separation = 0;
  double broadcast = 0;
};

/// The 5 x 5 x 5 grid, ids ordered speed-major then separation then broadcast.
[[nodiscard]] inline std::vector<GridPoint> paper_grid() {
  std::vector<GridPoint> grid;
  int id = 0;
  for (double v : kSpeedLevels)
    for (double d : kSeparationLevels)
      for (double t : kBroadcastLevels) grid.push_back({id++, v, d, t});
  return grid;
}

/// Arbitrary level lists; ids keep the standard-grid numbering when every level
/// is on the standard grid, otherwise they are sequential.
[[nodiscard]] inline std::vector<GridPoint> custom_grid(const std::vector<double> &speeds,
                                                        const std::vector<double> &separations,
                                                        const std::vector<double> &broadcasts) {
  auto index_of = [](const auto &levels, double x) {
    for (std::size_t i = 0; i < levels.size(); ++i)
      if (levels[i] == x) return static_cast<int>(i);
    return -1;
  };
  bool on_paper_grid = true;
  for (double v : speeds) on_paper_grid = on_paper_grid && index_of(kSpeedLevels, v) >= 0;
  for (double d : separations) on_paper_grid = on_paper_grid && index_of(kSeparationLevels, d) >= 0;
  for (double t : broadcasts) on_paper_grid = on_paper_grid && index_of(kBroadcastLevels, t) >= 0;
  std::vector<GridPoint> grid;
  int next = 0;
  for (double v : speeds)
    for (double d : separations)
      for (double t : broadcasts) {
        const int id = on_paper_grid ? index_of(kSpeedLevels, v) * 25 + index_of(kSeparationLevels, d) * 5 +
                                           index_of(kBroadcastLevels, t)
                                     : next;
        grid.push_back({id, v, d, t});
        ++next;
      }
  return grid;
}

[[nodiscard]] inline SwarmConfig make_config(const GridPoint &g, std::uint64_t seed, double max_duration = 180.0) {
  SwarmConfig c;
  c.config_id = g.config_id;
  c.params.speed = g.speed;
  c.params.separation = g.separation;
  c.params.broadcast = g.broadcast;
  c.seed = seed;
  c.max_trial_duration = max_duration;
  return c;
}

}  // namespace swarmsim
