#pragma once

// Scripted worlds shared by the unit tests and the acceptance binary.

#include <limits>
#include <vector>

#include "oracles.hpp"
#include "swarmsim/simulation.hpp"

namespace scenario {

using namespace swarmsim;

inline WorldConstants constants_for(int n) {
  WorldConstants wc;
  wc.swarm_size = n;
  return wc;
}

/// A world whose robots sit at the given points facing +x, with the target
/// region kept out of sight for the whole run.
inline WorldState static_world(const std::vector<oracle::Point> &pts) {
  std::vector<Pose> poses;
  for (const auto &p : pts) poses.push_back({{p.x, p.y}, 0.0});
  auto w = make_world(constants_for(static_cast<int>(pts.size())), 7, poses, {75, 75});
  w.target.appear_at = Ticks{std::numeric_limits<std::int64_t>::max() / 2};
  return w;
}

/// Runs the simulator's information exchange on motionless robots. Seeds are
/// injected as an inbox message at their tick, so uptake goes through the
/// normal path; the seeded value travels as the target's x coordinate.
inline oracle::GossipTrace simulate_static_gossip(const std::vector<oracle::Point> &pts,
                                                  const std::vector<oracle::Seed> &seeds, double broadcast_s,
                                                  std::int64_t horizon) {
  auto w = static_world(pts);
  BehaviorParams params;
  params.broadcast = broadcast_s;
  oracle::GossipTrace trace;
  for (std::int64_t t = 0; t < horizon; ++t) {
    for (const auto &s : seeds)
      if (s.tick == t) w.inboxes[static_cast<std::size_t>(s.robot)] = {Message{-1, {static_cast<double>(s.value), 0}}};
    const auto before = w.messages_delivered;
    (void)exchange_information(w, params, nullptr);
    trace.delivered.push_back(w.messages_delivered - before);
    ++w.clock;
  }
  for (const auto &r : w.robots) {
    trace.informed_at.push_back(r.informed_at ? std::optional(r.informed_at->count) : std::nullopt);
    trace.value.push_back(r.known_target ? std::optional(static_cast<int>(r.known_target->x)) : std::nullopt);
  }
  return trace;
}

/// Random static layout of `n` robots in a box small enough to be mostly
/// connected at 36 cm.
inline std::vector<oracle::Point> random_layout(RandomStream &rng, int n, double box) {
  std::vector<oracle::Point> pts;
  while (static_cast<int>(pts.size()) < n) {
    const oracle::Point p{rng.uniform(10, 10 + box), rng.uniform(10, 10 + box)};
    bool ok = true;
    for (const auto &q : pts) ok = ok && !oracle::linked(p, q, 7.0);
    if (ok) pts.push_back(p);
  }
  return pts;
}

/// World with every robot already heading for the target under flocking.
inline WorldState flocking_world(std::uint64_t seed) {
  auto w = init_world(WorldConstants{}, seed);
  w.clock = w.target.appear_at;
  for (auto &r : w.robots) {
    r.mode = Mode::move_to_target;
    r.known_target = w.target.center;
    r.informed_at = w.clock;
    r.broadcast_until = w.clock;
  }
  return w;
}

inline double min_pair_distance(const WorldState &w) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < w.robots.size(); ++i)
    for (std::size_t j = i + 1; j < w.robots.size(); ++j)
      best = std::min(best, distance(w.robots[i].pose.position, w.robots[j].pose.position));
  return best;
}

}  // namespace scenario
