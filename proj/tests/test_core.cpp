#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "scenarios.hpp"
#include "swarmsim/simulation.hpp"

using namespace swarmsim;
using scenario::constants_for;

namespace {

WorldState two_robots(Vec2 a, Vec2 b, double ha = 0.0, double hb = 0.0) {
  return make_world(constants_for(2), 1, {{a, ha}, {b, hb}}, {75, 75});
}

}  // namespace

TEST(Geometry, WrapAngleRange) {
  for (double a = -20; a < 20; a += 0.37) {
    const double w = wrap_angle(a);
    EXPECT_GE(w, -std::numbers::pi);
    EXPECT_LT(w, std::numbers::pi);
    EXPECT_NEAR(std::remainder(w - a, 2 * std::numbers::pi), 0.0, 1e-12);
  }
  EXPECT_DOUBLE_EQ(wrap_angle(std::numbers::pi), -std::numbers::pi);
}

TEST(Geometry, BodyFrame) {
  const Pose p{{10, 10}, std::numbers::pi / 2};
  const Vec2 b = to_body_frame(p, Vec2{10, 20} - p.position);
  EXPECT_NEAR(b.x, 10, 1e-12);
  EXPECT_NEAR(b.y, 0, 1e-12);
}

TEST(Rng, DerivedStreamsDiffer) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  RandomStream a(5), b(5);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.uniform(), b.uniform());
}

TEST(Rng, UniformBounds) {
  RandomStream r(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(r.below(7), 7u);
  }
}

TEST(Constants, TickConversion) {
  WorldConstants wc;
  EXPECT_EQ(wc.to_ticks(8.0).count, 80);
  EXPECT_EQ(wc.to_ticks(0.0).count, 0);
  EXPECT_EQ(wc.target_appear_tick().count, 30);
  EXPECT_DOUBLE_EQ(wc.to_seconds(Ticks{30}), 3.0);
  EXPECT_DOUBLE_EQ(wc.robot_radius(), 3.5);
}

TEST(Constants, RejectsBadValues) {
  WorldConstants wc;
  wc.comm_range = 5;
  EXPECT_THROW(wc.validate(), std::invalid_argument);
  wc = {};
  wc.tick_duration = 0;
  EXPECT_THROW(wc.validate(), std::invalid_argument);
}

TEST(InitWorld, SameSeedSameWorld) { EXPECT_EQ(init_world({}, 42), init_world({}, 42)); }

TEST(InitWorld, DifferentSeedsDiffer) { EXPECT_NE(init_world({}, 42).robots, init_world({}, 43).robots); }

TEST(InitWorld, PlacementInvariants) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto w = init_world({}, seed);
    ASSERT_EQ(w.robots.size(), 10u);
    for (const auto &r : w.robots) {
      ASSERT_GE(r.pose.position.x, 3.5);
      ASSERT_LE(r.pose.position.x, 146.5);
      ASSERT_GE(r.pose.position.y, 3.5);
      ASSERT_LE(r.pose.position.y, 146.5);
      ASSERT_EQ(r.mode, Mode::explore);
      ASSERT_FALSE(r.informed());
    }
    ASSERT_GE(scenario::min_pair_distance(w), 7.0);
    ASSERT_EQ(w.clock.count, 0);
  }
}

TEST(InitWorld, TargetCentreKeepsRegionInside) {
  double lo = 1e9, hi = -1e9;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const auto c = init_world({}, seed).target.center;
    lo = std::min({lo, c.x, c.y});
    hi = std::max({hi, c.x, c.y});
  }
  EXPECT_GE(lo, 25.0);
  EXPECT_LE(hi, 125.0);
  // the draws cover the allowed square rather than a corner of it
  EXPECT_LT(lo, 26.0);
  EXPECT_GT(hi, 124.0);
}

TEST(InitWorld, ImpossiblePlacementThrows) {
  WorldConstants wc;
  wc.arena_side = 60;
  wc.target_radius = 20;
  wc.swarm_size = 200;
  EXPECT_THROW((void)init_world(wc, 1), PlacementError);
}

TEST(Sensing, NeighbourAtExactlyCommRange) {
  auto w = two_robots({50, 50}, {86.0, 50});
  EXPECT_EQ(sense(w, 0).neighbors.size(), 1u);
  EXPECT_EQ(sense(w, 1).neighbors.size(), 1u);
  EXPECT_DOUBLE_EQ(sense(w, 0).neighbors[0].range, 36.0);
  w = two_robots({50, 50}, {86.1, 50});
  EXPECT_TRUE(sense(w, 0).neighbors.empty());
  EXPECT_TRUE(sense(w, 1).neighbors.empty());
}

TEST(Sensing, BearingIsBodyRelative) {
  const auto w = two_robots({50, 50}, {50, 70}, std::numbers::pi / 2);
  EXPECT_NEAR(sense(w, 0).neighbors[0].bearing, 0.0, 1e-12);
  const auto w2 = two_robots({50, 50}, {50, 70}, 0.0);
  EXPECT_NEAR(sense(w2, 0).neighbors[0].bearing, std::numbers::pi / 2, 1e-12);
}

TEST(Sensing, TargetInvisibleBeforeAppearance) {
  auto w = make_world(constants_for(1), 1, {{{75, 75}, 0}}, {75, 75});
  w.clock = Ticks{29};
  EXPECT_FALSE(sense(w, 0).in_target);
  w.clock = Ticks{30};
  EXPECT_TRUE(sense(w, 0).in_target);
}

TEST(Sensing, ProximityClearBeyondRange) {
  // body surface 10.1 cm from the east wall, front sensor facing it
  auto w = make_world(constants_for(1), 1, {{{150 - 3.5 - 10.1, 75}, 0}}, {75, 75});
  auto f = sense(w, 0);
  ASSERT_EQ(f.proximity.size(), 8u);
  EXPECT_DOUBLE_EQ(f.proximity[0].angle, 0.0);
  EXPECT_FALSE(f.proximity[0].distance.has_value());
  w.robots[0].pose.position.x = 150 - 3.5 - 9.0;
  f = sense(w, 0);
  ASSERT_TRUE(f.proximity[0].distance.has_value());
  EXPECT_NEAR(*f.proximity[0].distance, 9.0, 1e-9);
}

TEST(Sensing, ProximityIgnoresRobots) {
  const auto w = two_robots({50, 50}, {58, 50});
  for (const auto &p : sense(w, 0).proximity) EXPECT_FALSE(p.distance.has_value());
}

TEST(Sensing, BadIdThrows) {
  const auto w = two_robots({50, 50}, {58, 50});
  EXPECT_THROW((void)sense(w, 2), std::out_of_range);
}

TEST(Kinematics, ForwardStep) {
  auto w = make_world(constants_for(1), 1, {{{50, 50}, 0}}, {75, 75});
  const std::vector<WheelCommand> cmd{WheelCommand::forward(15)};
  step_kinematics(w, cmd);
  EXPECT_NEAR(w.robots[0].pose.position.x, 51.5, 1e-12);
  EXPECT_NEAR(w.robots[0].pose.position.y, 50.0, 1e-12);
  EXPECT_EQ(w.clock.count, 1);
}

TEST(Kinematics, RotateInPlace) {
  auto w = make_world(constants_for(1), 1, {{{50, 50}, 0}}, {75, 75});
  const std::vector<WheelCommand> cmd{WheelCommand::rotate(Turn::left, std::numbers::pi)};
  step_kinematics(w, cmd);
  EXPECT_EQ(w.robots[0].pose.position, (Vec2{50, 50}));
  EXPECT_NEAR(w.robots[0].pose.heading, std::numbers::pi / 10, 1e-12);
  EXPECT_EQ(w.robots[0].turn_command, Turn::left);
}

TEST(Kinematics, CommandCountMustMatch) {
  auto w = make_world(constants_for(2), 1, {{{20, 20}, 0}, {{60, 60}, 0}}, {75, 75});
  const std::vector<WheelCommand> cmd{WheelCommand::forward(5)};
  EXPECT_THROW(step_kinematics(w, cmd), std::invalid_argument);
}

TEST(Kinematics, WallClamp) {
  auto w = make_world(constants_for(1), 1, {{{145, 75}, 0}}, {75, 75});
  const std::vector<WheelCommand> cmd{WheelCommand::forward(15)};
  step_kinematics(w, cmd);
  EXPECT_DOUBLE_EQ(w.robots[0].pose.position.x, 146.5);
}

TEST(Kinematics, AdversarialDrivingStaysValid) {
  auto w = init_world({}, 11);
  RandomStream rng(99);
  for (int step = 0; step < 1000; ++step) {
    std::vector<WheelCommand> cmds;
    for (const auto &r : w.robots) {
      // drive hard at the nearest wall or at the arena centre, with random jerks
      const Vec2 p = r.pose.position;
      const double to_wall = std::min({p.x, p.y, 150 - p.x, 150 - p.y});
      const bool wall = step % 200 < 100;
      Vec2 goal = wall ? (to_wall == p.x ? Vec2{-1, p.y} : to_wall == p.y ? Vec2{p.x, -1}
                                          : to_wall == 150 - p.x ? Vec2{151, p.y} : Vec2{p.x, 151})
                       : Vec2{75, 75};
      w.robots[static_cast<std::size_t>(r.id)].pose.heading = (goal - p).angle() + rng.uniform(-0.3, 0.3);
      cmds.push_back(WheelCommand::forward(15));
    }
    step_kinematics(w, cmds);
    for (const auto &r : w.robots) {
      ASSERT_GE(r.pose.position.x, 3.5);
      ASSERT_LE(r.pose.position.x, 146.5);
      ASSERT_GE(r.pose.position.y, 3.5);
      ASSERT_LE(r.pose.position.y, 146.5);
    }
    ASSERT_GE(scenario::min_pair_distance(w), 7.0 - w.constants.overlap_tolerance) << "step " << step;
  }
}

TEST(Kinematics, HeadOnPairSeparatedSymmetrically) {
  auto w = two_robots({50, 50}, {57.5, 50}, 0.0, std::numbers::pi);
  const std::vector<WheelCommand> cmd(2, WheelCommand::forward(10));
  step_kinematics(w, cmd);
  EXPECT_NEAR(distance(w.robots[0].pose.position, w.robots[1].pose.position), 7.0, 1e-9);
  EXPECT_NEAR(w.robots[0].pose.position.x + w.robots[1].pose.position.x, 107.5, 1e-9);
}

TEST(Messaging, NoNeighboursNoDeliveries) {
  auto w = two_robots({20, 20}, {120, 120});
  w.robots[0].known_target = Vec2{75, 75};
  w.robots[0].mode = Mode::share_target;
  w.robots[0].broadcast_until = Ticks{80};
  deliver_messages(w);
  EXPECT_EQ(w.messages_delivered, 0u);
  EXPECT_TRUE(w.inboxes[1].empty());
}

TEST(Messaging, FullNeighbourhood) {
  std::vector<Pose> poses{{{75, 75}, 0}};
  for (int k = 0; k < 9; ++k) poses.push_back({Vec2{75, 75} + 20.0 * Vec2::unit(k * 2 * std::numbers::pi / 9), 0});
  auto w = make_world(constants_for(10), 1, poses, {75, 75});
  w.robots[0].known_target = Vec2{30, 40};
  w.robots[0].mode = Mode::share_target;
  w.robots[0].broadcast_until = Ticks{80};
  deliver_messages(w);
  EXPECT_EQ(w.messages_delivered, 9u);
  for (int k = 1; k < 10; ++k) {
    ASSERT_EQ(w.inboxes[static_cast<std::size_t>(k)].size(), 1u);
    EXPECT_EQ(w.inboxes[static_cast<std::size_t>(k)][0].target, (Vec2{30, 40}));
  }
  EXPECT_TRUE(w.inboxes[0].empty());
}

TEST(Messaging, NotBroadcastingAfterWindow) {
  RobotState r;
  r.known_target = Vec2{1, 1};
  r.mode = Mode::share_target;
  r.broadcast_until = Ticks{10};
  EXPECT_TRUE(is_broadcasting(r, Ticks{9}));
  EXPECT_FALSE(is_broadcasting(r, Ticks{10}));
  r.mode = Mode::explore;
  EXPECT_FALSE(is_broadcasting(r, Ticks{5}));
}

TEST(Messaging, ChainRelaysOneHopPerTick) {
  const std::vector<oracle::Point> pts{{30, 50}, {60, 50}, {90, 50}};
  const std::int64_t k = 4;
  const auto sim = scenario::simulate_static_gossip(pts, {{0, k, 1}}, 8.0, 40);
  EXPECT_EQ(sim.informed_at[0], k);
  EXPECT_EQ(sim.informed_at[1], k + 1);
  EXPECT_EQ(sim.informed_at[2], k + 2);
  const auto ref = oracle::spread(pts, {{0, k, 1}}, 80, 40, 36.0);
  EXPECT_EQ(sim.informed_at, ref.informed_at);
  EXPECT_EQ(sim.delivered, ref.delivered);
  const auto hops = oracle::bfs_hops(pts, 0, 36.0);
  for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_EQ(*sim.informed_at[i], k + hops[i]);
}

TEST(Completion, AllInsideAtAppearance) {
  std::vector<Pose> poses;
  for (int i = 0; i < 10; ++i) poses.push_back({{60.0 + 8.0 * (i % 4), 65.0 + 8.0 * (i / 4)}, 0});
  auto w = make_world(constants_for(10), 1, poses, {72, 72});
  for (w.clock = Ticks{0}; w.clock.count < 100 && !w.completed_at; ++w.clock) check_completion(w);
  ASSERT_TRUE(w.completed_at);
  EXPECT_EQ(w.completed_at->count, 30);
}

TEST(Completion, NineOfTenIsNotEnough) {
  std::vector<Pose> poses;
  for (int i = 0; i < 9; ++i) poses.push_back({{60.0 + 8.0 * (i % 4), 65.0 + 8.0 * (i / 4)}, 0});
  poses.push_back({{140, 140}, 0});
  auto w = make_world(constants_for(10), 1, poses, {72, 72});
  w.clock = Ticks{40};
  EXPECT_FALSE(check_completion(w));
  EXPECT_FALSE(w.completed_at);
  EXPECT_EQ(std::count_if(w.first_entry.begin(), w.first_entry.end(), [](auto e) { return e.has_value(); }), 9);
}

TEST(Completion, Latches) {
  auto w = make_world(constants_for(2), 1, {{{70, 70}, 0}, {{80, 80}, 0}}, {75, 75});
  w.clock = Ticks{35};
  EXPECT_EQ(check_completion(w), Ticks{35});
  w.robots[1].pose.position = {140, 140};
  w.clock = Ticks{36};
  EXPECT_FALSE(check_completion(w));
  EXPECT_EQ(w.completed_at, Ticks{35});
  w.robots[1].pose.position = {80, 80};
  w.clock = Ticks{37};
  EXPECT_FALSE(check_completion(w));
  EXPECT_EQ(w.completed_at, Ticks{35});
}

TEST(Completion, InvisibleTargetNeverCompletes) {
  auto w = make_world(constants_for(1), 1, {{{75, 75}, 0}}, {75, 75});
  w.clock = Ticks{29};
  EXPECT_FALSE(check_completion(w));
  EXPECT_FALSE(w.first_entry[0]);
}
