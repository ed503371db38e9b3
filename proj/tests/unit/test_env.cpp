#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "scenav/env/nav_env.hpp"
#include "scenav/env/world.hpp"

using namespace scenav;
using geom::Circle;
using geom::Rect;
using geom::Vec2;

namespace {

World open_world(double w, double h) {
  World world;
  world.name = "open";
  world.bounds = Rect{{0, 0}, {w, h}};
  return world;
}

RobotState pose(double x, double y, double heading, double tx, double ty) {
  RobotState s;
  s.x = x;
  s.y = y;
  s.heading = heading;
  s.target_x = tx;
  s.target_y = ty;
  return s;
}

// Independent ray/line oracle: distance from p along angle a to the infinite
// line through q with direction angle b.
double ray_line(Vec2 p, double a, Vec2 q, double b) {
  const double dx = std::cos(a), dy = std::sin(a);
  const double ex = std::cos(b), ey = std::sin(b);
  const double den = dx * ey - dy * ex;
  return ((q.x - p.x) * ey - (q.y - p.y) * ex) / den;
}

}  // namespace

TEST(Geometry, WrapAngleRange) {
  EXPECT_DOUBLE_EQ(geom::wrap_angle(std::numbers::pi), std::numbers::pi);
  EXPECT_DOUBLE_EQ(geom::wrap_angle(-std::numbers::pi), std::numbers::pi);
  EXPECT_NEAR(geom::wrap_angle(3 * std::numbers::pi / 2), -std::numbers::pi / 2, 1e-15);
}

TEST(Geometry, RayPrimitives) {
  const auto hit = geom::ray_segment({0, 0}, {1, 0}, {2, -1}, {2, 1});
  ASSERT_TRUE(hit);
  EXPECT_DOUBLE_EQ(*hit, 2.0);
  EXPECT_FALSE(geom::ray_segment({0, 0}, {-1, 0}, {2, -1}, {2, 1}));
  const auto c = geom::ray_circle({0, 0}, {1, 0}, Circle{{3, 0}, 1});
  ASSERT_TRUE(c);
  EXPECT_DOUBLE_EQ(*c, 2.0);
  const auto r = geom::ray_rect({0, 0.5}, {1, 0}, Rect{{1, 0}, {2, 1}});
  ASSERT_TRUE(r);
  EXPECT_DOUBLE_EQ(*r, 1.0);
  EXPECT_DOUBLE_EQ(geom::segment_point_distance({0, 0}, {2, 0}, {1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(geom::segment_rect_distance({0, 0}, {0.5, 0}, Rect{{1, -1}, {2, 1}}), 0.5);
}

TEST(World, BuiltinsValidate) {
  for (const char* name : {"empty", "four-block", "corridor"}) {
    const World w = worlds::builtin(name);
    EXPECT_NO_THROW(w.validate(0.1)) << name;
  }
  EXPECT_THROW(worlds::builtin("moon"), std::invalid_argument);
}

TEST(World, ParseSerializeRoundTrip) {
  const World w = worlds::four_block();
  const World back = worlds::parse(worlds::serialize(w), w.name);
  ASSERT_EQ(back.obstacles.size(), w.obstacles.size());
  EXPECT_EQ(worlds::serialize(back), worlds::serialize(w));
}

TEST(World, ParseErrorsNameTheLine) {
  try {
    worlds::parse("bounds 0 0 5 5\nrect 1 1\n", "bad");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("bad:2"), std::string::npos);
  }
  EXPECT_THROW(worlds::parse("rect 1 1 2 2\n", "nobounds"), std::invalid_argument);
  EXPECT_THROW(worlds::load("/nonexistent/world.txt"), std::runtime_error);
}

TEST(World, DisconnectedOrOutOfBoundsRejected) {
  // A wall splitting the arena in two.
  EXPECT_THROW(worlds::parse("bounds 0 0 6 6\nrect 2.9 0 3.1 6\n", "split").validate(0.1), std::invalid_argument);
  EXPECT_THROW(worlds::parse("bounds 0 0 6 6\nrect 5 5 7 7\n", "outside").validate(0.1), std::invalid_argument);
  EXPECT_THROW(NavEnv(worlds::parse("bounds 0 0 6 6\nrect 2.9 0 3.1 6\n"), EnvConfig{}, 1), std::invalid_argument);
}

TEST(Reset, DeterministicPerSeed) {
  const World w = worlds::four_block();
  const EnvConfig cfg;
  const auto [a, oa] = reset(w, cfg, 42);
  const auto [b, ob] = reset(w, cfg, 42);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(a.heading, b.heading);
  EXPECT_EQ(a.target_x, b.target_x);
  EXPECT_EQ(oa.flatten(), ob.flatten());
  EXPECT_EQ(a.steps_taken, 0);
}

TEST(Reset, PlacementsAvoidObstacle) {
  World w = open_world(6, 6);
  w.obstacles.push_back(Rect{{2, 2}, {4, 4}});
  const EnvConfig cfg;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const auto [st, obs] = reset(w, cfg, s);
    // Corner regions of the inflated box are allowed; check true clearance.
    const double dx = std::max({2 - st.x, 0.0, st.x - 4});
    const double dy = std::max({2 - st.y, 0.0, st.y - 4});
    ASSERT_GE(std::hypot(dx, dy), cfg.robot_radius) << s;
    const double tx = std::max({2 - st.target_x, 0.0, st.target_x - 4});
    const double ty = std::max({2 - st.target_y, 0.0, st.target_y - 4});
    ASSERT_GE(std::hypot(tx, ty), cfg.robot_radius) << s;
  }
}

TEST(Reset, MinimumStartGoalDistance) {
  const World w = worlds::empty();
  const EnvConfig cfg;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const auto [st, obs] = reset(w, cfg, s);
    ASSERT_GE(std::hypot(st.x - st.target_x, st.y - st.target_y), cfg.min_start_goal_dist);
    ASSERT_GE(st.x, cfg.robot_radius);
    ASSERT_LE(st.x, 6 - cfg.robot_radius);
  }
}

TEST(Reset, ImpossiblePlacementFails) {
  EnvConfig cfg;
  cfg.min_start_goal_dist = 100.0;
  cfg.max_placement_tries = 50;
  EXPECT_THROW(reset(worlds::empty(), cfg, 1), std::runtime_error);
}

TEST(Lidar, OpenArenaClampsToMaxRange) {
  const World w = open_world(10, 10);
  const auto l = raycast_lidar(w, EnvConfig{}, pose(5, 5, 0.3, 8, 8));
  for (double v : l) EXPECT_EQ(v, 3.5);
}

TEST(Lidar, FacingWallOneMeter) {
  const World w = open_world(10, 10);
  const auto l = raycast_lidar(w, EnvConfig{}, pose(9, 5, 0.0, 1, 1));
  EXPECT_DOUBLE_EQ(l[kFrontRay], 1.0);
  EXPECT_NEAR(l[2], 1.0 / std::cos(std::numbers::pi / 6), 1e-12);  // -30 deg
  EXPECT_NEAR(l[4], 1.0 / std::cos(std::numbers::pi / 6), 1e-12);
}

TEST(Lidar, RayOrderRightToLeft) {
  const auto off = lidar_offsets();
  EXPECT_NEAR(off[0], -std::numbers::pi / 2, 1e-15);
  EXPECT_EQ(off[kFrontRay], 0.0);
  EXPECT_NEAR(off[6], std::numbers::pi / 2, 1e-15);
}

TEST(Lidar, SlantedWallMatchesAnalyticIntersection) {
  // A long thin segment approximated by a circle-free setup: a wall line at 45
  // degrees to the left, built from the arena boundary by rotating the robot.
  const World w = open_world(10, 10);
  const EnvConfig cfg;
  const RobotState s = pose(8.5, 5, std::numbers::pi / 4, 1, 1);
  const auto l = raycast_lidar(w, cfg, s);
  const auto off = lidar_offsets();
  for (std::size_t i = 0; i < kNumRays; ++i) {
    const double a = s.heading + off[i];
    double best = cfg.max_range;
    // Four walls: x=0, x=10 (vertical), y=0, y=10 (horizontal).
    for (const auto& [q, b] : std::vector<std::pair<Vec2, double>>{
             {{0, 0}, std::numbers::pi / 2}, {{10, 0}, std::numbers::pi / 2}, {{0, 0}, 0.0}, {{0, 10}, 0.0}}) {
      const double t = ray_line({s.x, s.y}, a, q, b);
      if (std::isfinite(t) && t >= 0) best = std::min(best, t);
    }
    EXPECT_NEAR(l[i], best, 1e-9) << "ray " << i;
  }
  // Asymmetric: the right-hand rays see the x=10 wall sooner than the left ones.
  EXPECT_LT(l[2], l[4]);
}

TEST(Lidar, MirrorSymmetry) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const EnvConfig cfg;
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    World w = open_world(6, 6);
    World m = open_world(6, 6);
    for (int k = 0; k < 3; ++k) {
      const double x = 0.5 + 4 * u(rng), y = 0.5 + 4 * u(rng);
      const double sx = 0.2 + 0.6 * u(rng), sy = 0.2 + 0.6 * u(rng);
      if (u(rng) < 0.5) {
        w.obstacles.push_back(Rect{{x, y}, {x + sx, y + sy}});
        m.obstacles.push_back(Rect{{x, 6 - y - sy}, {x + sx, 6 - y}});
      } else {
        w.obstacles.push_back(Circle{{x, y}, sx / 2});
        m.obstacles.push_back(Circle{{x, 6 - y}, sx / 2});
      }
    }
    const double px = 0.5 + 5 * u(rng);
    const double tx = 6 * u(rng), ty = 6 * u(rng);
    const RobotState s = pose(px, 3.0, 0.0, tx, ty);
    const RobotState sm = pose(px, 3.0, 0.0, tx, 6 - ty);
    if (w.clearance(s.position()) <= 0) continue;
    const Observation a = observe(w, cfg, s);
    const Observation b = observe(m, cfg, sm);
    for (std::size_t i = 0; i < kNumRays; ++i) ASSERT_NEAR(a.lidar[i], b.lidar[6 - i], 1e-9);
    if (std::abs(std::abs(a.bearing) - std::numbers::pi) > 1e-9) ASSERT_NEAR(a.bearing, -b.bearing, 1e-12);
    ASSERT_NEAR(a.distance, b.distance, 1e-12);
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(Step, ForwardRewardMatchesFormula) {
  EnvConfig cfg;
  cfg.step_len = 0.1;
  RobotState s = pose(1, 3, 0.0, 5, 3);
  const auto r = step(open_world(6, 6), cfg, s, NavAction::Forward);
  EXPECT_NEAR(r.reward, 0.299, 1e-12);
  EXPECT_EQ(r.terminal, Terminal::None);
  EXPECT_EQ(s.steps_taken, 1);
}

TEST(Step, TurnCostsStepPenalty) {
  RobotState s = pose(1, 3, 0.0, 5, 3);
  const auto r = step(open_world(6, 6), EnvConfig{}, s, NavAction::Left);
  EXPECT_DOUBLE_EQ(r.reward, -0.001);
  EXPECT_NEAR(s.heading, std::numbers::pi / 6, 1e-15);
}

TEST(Step, LeftTurnIncreasesBearing) {
  const World w = open_world(6, 6);
  RobotState s = pose(1, 3, 0.0, 5, 3.5);
  const double before = observe(w, EnvConfig{}, s).bearing;
  const auto r = step(w, EnvConfig{}, s, NavAction::Left);
  EXPECT_NEAR(r.obs.bearing - before, std::numbers::pi / 6, 1e-12);
}

TEST(Step, ForwardIntoWallCollides) {
  RobotState s = pose(5.85, 3, 0.0, 1, 1);
  const auto r = step(open_world(6, 6), EnvConfig{}, s, NavAction::Forward);
  EXPECT_EQ(r.reward, -1.0);
  EXPECT_EQ(r.terminal, Terminal::Collision);
  EXPECT_THROW(step(open_world(6, 6), EnvConfig{}, s, NavAction::Left), std::logic_error);
}

TEST(Step, ReachingTargetPaysOne) {
  RobotState s = pose(3, 3, 0.0, 3.3, 3);
  const auto r = step(open_world(6, 6), EnvConfig{}, s, NavAction::Forward);
  EXPECT_EQ(r.terminal, Terminal::ReachedTarget);
  EXPECT_EQ(r.reward, 1.0);
}

TEST(Step, TimeoutAtMaxSteps) {
  EnvConfig cfg;
  cfg.max_steps = 5;
  RobotState s = pose(3, 3, 0.0, 1, 1);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(step(open_world(6, 6), cfg, s, NavAction::Left).terminal, Terminal::None);
  EXPECT_EQ(step(open_world(6, 6), cfg, s, NavAction::Left).terminal, Terminal::Timeout);
}

TEST(Step, TwelveLeftTurnsRestoreHeading) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  for (int trial = 0; trial < 100; ++trial) {
    const double h = u(rng);
    RobotState s = pose(3, 3, h, 1, 1);
    for (int i = 0; i < 12; ++i) step(open_world(6, 6), EnvConfig{}, s, NavAction::Left);
    EXPECT_NEAR(std::abs(geom::wrap_angle(s.heading - h)), 0.0, 1e-12);
  }
}

TEST(Step, CollisionMonotoneInStepLength) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const World w = worlds::four_block();
  const EnvConfig cfg;
  int collided = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const Vec2 p{0.2 + 5.6 * u(rng), 0.2 + 5.6 * u(rng)};
    if (w.clearance(p) < cfg.robot_radius) continue;
    const double h = 2 * std::numbers::pi * u(rng);
    const double len = 2.0 * u(rng);
    if (sweep_collides(w, cfg, p, h, len)) {
      ++collided;
      for (double longer : {len + 1e-6, len * 1.5, len + 1.0}) ASSERT_TRUE(sweep_collides(w, cfg, p, h, longer));
    }
  }
  EXPECT_GT(collided, 100);
}

TEST(Step, RewardTelescopesOnRandomTrajectories) {
  std::mt19937_64 rng(17);
  const World w = worlds::empty();
  EnvConfig cfg;
  cfg.goal_radius = 0.01;
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto [s, obs] = reset(w, cfg, seed);
    const double d0 = s.target_distance();
    double sum = 0.0;
    int t = 0;
    for (; t < 60; ++t) {
      RobotState probe = s;
      const NavAction a = kAllActions[rng() % 3];
      const auto r = step(w, cfg, probe, a);
      if (r.terminal != Terminal::None) break;
      s = probe;
      sum += r.reward;
    }
    EXPECT_NEAR(sum, 3.0 * (d0 - s.target_distance()) - 0.001 * t, 1e-9);
    ++checked;
  }
  EXPECT_EQ(checked, 200);
}

TEST(SuccessRate, Examples) {
  using T = Terminal;
  EXPECT_EQ(success_rate(std::vector<T>{T::ReachedTarget, T::Collision}), 0.5);
  EXPECT_EQ(success_rate(std::vector<T>(100, T::ReachedTarget)), 1.0);
  EXPECT_EQ(success_rate(std::vector<T>{T::Timeout, T::ReachedTarget, T::ReachedTarget, T::Collision}), 0.5);
  EXPECT_THROW(success_rate(std::vector<T>{}), std::invalid_argument);
}

TEST(NavEnvClass, MustResetBeforeStepping) {
  NavEnv env(worlds::empty(), EnvConfig{}, 1);
  EXPECT_THROW(env.step(NavAction::Forward), std::logic_error);
  env.reset();
  EXPECT_NO_THROW(env.step(NavAction::Left));
  EXPECT_THROW(env.reset_to(pose(-1, 3, 0, 1, 1)), std::invalid_argument);
}

TEST(NavEnvClass, NormalizationRanges) {
  NavEnv env(worlds::four_block(), EnvConfig{}, 3);
  for (int e = 0; e < 50; ++e) {
    const auto obs = env.scale().normalize(env.reset());
    for (std::size_t i = 0; i < kNumRays; ++i) {
      ASSERT_GT(obs[i], 0.0);
      ASSERT_LE(obs[i], 1.0);
    }
    ASSERT_LE(std::abs(obs[kBearingIndex]), 1.0);
    ASSERT_LE(obs[kDistanceIndex], 1.0);
  }
}
