#pragma once

#include <optional>
#include <string>

#include "swarmsim/behaviors/flocking.hpp"

namespace swarmsim {

enum class OperatorCommand { share_target, move_to_target };

/// Keyboard hold state of the operator for one tick.
struct HeldKeys {
  bool left = false;
  bool right = false;

  friend bool operator==(const HeldKeys &, const HeldKeys &) = default;
};

struct OperatorNotice {
  std::string code;
  std::string text;

  friend bool operator==(const OperatorNotice &, const OperatorNotice &) = default;
};

/// Applies a behaviour button to the human robot. Both buttons require the
/// robot to know the target; otherwise the press is rejected with a notice.
/// Move-to-target is final for the round.
[[nodiscard]] inline std::optional<OperatorNotice> apply_operator_command(RobotState &robot, OperatorCommand cmd) {
  if (!robot.informed()) {
    return OperatorNotice{"not_informed",
                          cmd == OperatorCommand::share_target
                              ? "Share Target is available once your robot knows the target location."
                              : "Move to Target is available once your robot knows the target location."};
  }
  if (robot.mode == Mode::move_to_target) return std::nullopt;
  if (cmd == OperatorCommand::share_target) {
    robot.mode = Mode::share_target;
    robot.operator_sharing = true;
  } else {
    robot.mode = Mode::move_to_target;
    robot.operator_sharing = false;
  }
  return std::nullopt;
}

/// Drive command of the operator's robot. A single held arrow key rotates in
/// place; otherwise the robot drives straight at the team speed. After
/// Move-to-target the keyboard is ignored and the flocking controller drives.
[[nodiscard]] inline WheelCommand human_step(HeldKeys keys, const SenseFrame &sense, const RobotState &robot,
                                             const BehaviorParams &params, const WorldConstants &wc) {
  if (robot.mode == Mode::move_to_target) return move_to_target_step(sense, robot, params);
  if (keys.left != keys.right) return WheelCommand::rotate(keys.left ? Turn::left : Turn::right, wc.angular_speed);
  return WheelCommand::forward(params.speed);
}

}  // namespace swarmsim
