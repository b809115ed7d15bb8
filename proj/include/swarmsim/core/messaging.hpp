#pragma once

#include <vector>

#include "swarmsim/core/world.hpp"

namespace swarmsim {

/// Whether `r` transmits the target location on the tick at `clock`.
[[nodiscard]] inline bool is_broadcasting(const RobotState &r, Ticks clock) {
  if (!r.known_target) return false;
  if (r.control == Control::human) return r.operator_sharing;
  return r.mode == Mode::share_target && r.broadcast_until && clock < *r.broadcast_until;
}

/// Every broadcaster deposits its known target into the inbox of each robot
/// within communication range. The inboxes replace the previous tick's and
/// are read at the next sense. Messages are ordered by sender id.
inline void deliver_messages(WorldState &w) {
  const auto n = w.robots.size();
  std::vector<std::vector<Message>> inboxes(n);
  const double range = w.constants.comm_range;
  for (const auto &sender : w.robots) {
    if (!is_broadcasting(sender, w.clock)) continue;
    for (const auto &rx : w.robots) {
      if (rx.id == sender.id) continue;
      if ((rx.pose.position - sender.pose.position).norm() <= range) {
        inboxes[static_cast<std::size_t>(rx.id)].push_back({sender.id, *sender.known_target});
        ++w.messages_delivered;
      }
    }
  }
  w.inboxes = std::move(inboxes);
}

}  // namespace swarmsim
