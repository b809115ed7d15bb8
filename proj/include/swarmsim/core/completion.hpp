#pragma once

#include <algorithm>
#include <optional>

#include "swarmsim/core/sensing.hpp"

namespace swarmsim {

/// Records first entries and latches completion once every robot centre is
/// inside the visible target region at the same clock value. Returns the
/// completion tick when it fires on this call.
inline std::optional<Ticks> check_completion(WorldState &w) {
  if (!w.target_visible()) return std::nullopt;
  bool all_inside = true;
  for (const auto &r : w.robots) {
    const bool inside = w.target.contains(r.pose.position);
    auto &entry = w.first_entry[static_cast<std::size_t>(r.id)];
    if (inside && !entry) entry = w.clock;
    all_inside = all_inside && inside;
  }
  if (all_inside && !w.completed_at) {
    w.completed_at = w.clock;
    return w.clock;
  }
  return std::nullopt;
}

}  // namespace swarmsim
