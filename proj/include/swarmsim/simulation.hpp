#pragma once

#include <optional>
#include <vector>

#include "swarmsim/behaviors/explore.hpp"
#include "swarmsim/behaviors/flocking.hpp"
#include "swarmsim/behaviors/human.hpp"
#include "swarmsim/behaviors/information.hpp"
#include "swarmsim/core/completion.hpp"
#include "swarmsim/core/kinematics.hpp"
#include "swarmsim/core/messaging.hpp"

namespace swarmsim {

/// Operator input applied on one tick to the human-controlled robot.
struct HumanTickInput {
  int robot_id = 0;
  HeldKeys keys;
  std::vector<OperatorCommand> commands;  // button presses since the last tick, in order
};

struct TickReport {
  std::vector<OperatorNotice> notices;
  std::optional<Ticks> completed;
};

/// Information phase of a tick: every robot senses the pre-tick snapshot,
/// takes up target knowledge, the operator's buttons are applied, and the
/// broadcasters fill the inboxes read on the next tick.
inline std::vector<SenseFrame> exchange_information(WorldState &w, const BehaviorParams &params,
                                                    const HumanTickInput *human,
                                                    std::vector<OperatorNotice> *notices = nullptr) {
  auto frames = sense_all(w);
  for (auto &r : w.robots) update_information_state(frames[static_cast<std::size_t>(r.id)], r, params, w);
  if (human) {
    auto &r = w.robots.at(static_cast<std::size_t>(human->robot_id));
    for (auto cmd : human->commands) {
      if (auto notice = apply_operator_command(r, cmd); notice && notices) notices->push_back(std::move(*notice));
    }
  }
  deliver_messages(w);
  return frames;
}

/// One synchronous tick. Every controller reads the same pre-tick snapshot,
/// so evaluation order does not matter.
inline TickReport advance(WorldState &w, const BehaviorParams &params, const HumanTickInput *human = nullptr) {
  TickReport report;
  const auto frames = exchange_information(w, params, human, &report.notices);
  std::vector<WheelCommand> commands(w.robots.size());
  for (auto &r : w.robots) {
    const auto i = static_cast<std::size_t>(r.id);
    if (r.control == Control::human) {
      const HeldKeys keys = human && human->robot_id == r.id ? human->keys : HeldKeys{};
      commands[i] = human_step(keys, frames[i], r, params, w.constants);
    } else if (r.mode == Mode::move_to_target) {
      commands[i] = move_to_target_step(frames[i], r, params);
    } else {
      auto out = explore_step(frames[i], r.controller, params, w.constants, w.robot_rng[i]);
      commands[i] = out.command;
      r.controller = out.controller;
    }
  }
  step_kinematics(w, commands);
  report.completed = check_completion(w);
  return report;
}

}  // namespace swarmsim
