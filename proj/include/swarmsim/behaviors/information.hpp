#pragma once

#include "swarmsim/behaviors/params.hpp"
#include "swarmsim/core/sensing.hpp"

namespace swarmsim {

/// First-time information uptake and the end of the broadcast window.
///
/// An uninformed robot becomes informed by standing in the visible target
/// region (it then stores the true region centre) or, failing that, by the
/// first inbox message in sender order. Autonomous robots start sharing for
/// the broadcast duration, or go straight to the target when it is zero. The
/// human robot only records the knowledge; its mode follows operator buttons.
/// Later messages never change anything.
inline void update_information_state(const SenseFrame &sense, RobotState &robot, const BehaviorParams &params,
                                     const WorldState &world) {
  const Ticks clock = world.clock;
  if (!robot.informed() && (sense.in_target || !sense.inbox.empty())) {
    robot.known_target = sense.in_target ? world.target.center : sense.inbox.front().target;
    robot.informed_at = clock;
    if (robot.control == Control::autonomous) {
      const Ticks window = world.constants.to_ticks(params.broadcast);
      robot.broadcast_until = clock + window;
      robot.mode = window.count > 0 ? Mode::share_target : Mode::move_to_target;
    }
  }
  if (robot.control == Control::autonomous && robot.mode == Mode::share_target && robot.broadcast_until &&
      clock >= *robot.broadcast_until) {
    robot.mode = Mode::move_to_target;
  }
}

}  // namespace swarmsim
