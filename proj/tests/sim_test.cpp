#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "memsnn/sim.hpp"

using namespace memsnn;

namespace {

constexpr double kPi = std::numbers::pi;

ArenaSpec open_arena() {
  ArenaSpec a;
  a.bounds = Box2(Vec2(-1, -1), Vec2(1, 1));
  a.walls = {{{-1, -1}, {1, -1}}, {{1, -1}, {1, 1}}, {{1, 1}, {-1, 1}}, {{-1, 1}, {-1, -1}}};
  a.light = Vec2(1, 1);
  return a;
}

RobotPose at(double x, double y, double heading) {
  RobotPose p;
  p.position = Vec2(x, y);
  p.heading = heading;
  return p;
}

bool solid(const ArenaSpec& arena, const Vec2& p) { return !arena.in_free_space(p); }

// March along the ray until the point enters solid space, then bisect.
double marching_raycast(const Vec2& o, const Vec2& d, const ArenaSpec& arena) {
  const double step = 1e-4;
  double t = 0.0;
  while (t < 4.0) {
    const double next = t + step;
    if (solid(arena, o + next * d)) {
      double lo = t, hi = next;
      for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (solid(arena, o + mid * d) ? hi : lo) = mid;
      }
      return lo;
    }
    t = next;
  }
  return kNoHit;
}

Vec2 random_free_point(const ArenaSpec& arena, Rng& rng, double margin) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const Vec2 p(u(rng), u(rng));
    if (arena.in_free_space(p) && arena.clearance(p) > margin) return p;
  }
}

}  // namespace

TEST(Arena, Zones) {
  const auto photo = build_arena(TaskKind::Phototaxis);
  EXPECT_TRUE(photo.goal.contains(Vec2(0.9, 0.8)));
  EXPECT_FALSE(photo.goal.contains(Vec2(0.8, 0.8)));
  EXPECT_TRUE(photo.start.contains(Vec2(-0.8, -0.8)));
  EXPECT_FALSE(photo.start.contains(Vec2(-0.7, -0.8)));
  EXPECT_FALSE(photo.in_free_space(Vec2(0, 0)));
  EXPECT_TRUE(photo.in_free_space(Vec2(0.5, 0)));
  EXPECT_EQ(photo.light, Vec2(1, 1));

  const auto maze = build_arena(TaskKind::TMaze);
  EXPECT_TRUE(maze.reward_2.contains(Vec2(0.9, 0.5)));
  EXPECT_FALSE(maze.reward_1.contains(Vec2(0.9, 0.5)));
  EXPECT_TRUE(maze.reward_1.contains(Vec2(-0.9, 0.5)));
  EXPECT_TRUE(maze.in_free_space(Vec2(0, 0)));
  EXPECT_FALSE(maze.in_free_space(Vec2(0.6, 0)));
  EXPECT_FALSE(maze.in_free_space(Vec2(-0.6, -0.5)));
  EXPECT_TRUE(maze.start.contains(Vec2(0.1, -0.8)));
  EXPECT_FALSE(maze.start.contains(Vec2(0.1, -0.3)));
  EXPECT_EQ(maze.light, Vec2(0.5, 1));
}

TEST(Raycast, Examples) {
  const auto photo = build_arena(TaskKind::Phototaxis);
  EXPECT_NEAR(raycast(Vec2(-0.7, 0), Vec2(1, 0), photo), 0.3, 1e-12);
  EXPECT_NEAR(raycast(Vec2(0.9, 0.9), Vec2(1, 0), photo), 0.1, 1e-12);

  ArenaSpec corridor;
  corridor.walls = {{{-1, -0.1}, {1, -0.1}}, {{-1, 0.1}, {1, 0.1}}};
  EXPECT_EQ(raycast(Vec2(0, 0), Vec2(1, 0), corridor), kNoHit);
  EXPECT_NEAR(raycast(Vec2(0, 0), Vec2(0, 1), corridor), 0.1, 1e-12);
}

TEST(Raycast, MatchesMarchingOracle) {
  Rng rng(31);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (auto task : {TaskKind::Phototaxis, TaskKind::TMaze}) {
    const auto arena = build_arena(task);
    for (int i = 0; i < 150; ++i) {
      const Vec2 o = random_free_point(arena, rng, 0.01);
      const double a = angle(rng);
      const Vec2 d(std::cos(a), std::sin(a));
      const double fast = raycast(o, d, arena);
      const double slow = marching_raycast(o, d, arena);
      ASSERT_NEAR(fast, slow, 1e-6) << o.transpose() << " angle " << a;
    }
  }
}

TEST(Segment, Blocking) {
  const auto photo = build_arena(TaskKind::Phototaxis);
  EXPECT_TRUE(segment_blocked(Vec2(-0.8, -0.8), Vec2(1, 1), photo));
  EXPECT_FALSE(segment_blocked(Vec2(0.5, 0.5), Vec2(1, 1), photo));
  EXPECT_FALSE(segment_blocked(Vec2(-0.8, 0.8), Vec2(1, 1), photo));
}

TEST(Kinematics, Forward) {
  const auto arena = open_arena();
  const auto p = kinematics_step(at(0, 0, kPi / 2), Action::Forward, {}, arena);
  EXPECT_NEAR(p.position.x(), 0.0, 1e-15);
  EXPECT_NEAR(p.position.y(), 0.005, 1e-15);
  EXPECT_NEAR(p.heading, kPi / 2, 1e-15);
}

TEST(Kinematics, LeftAndRight) {
  const auto arena = open_arena();
  auto p = kinematics_step(at(0, 0, kPi / 2), Action::Left, {}, arena);
  EXPECT_NEAR(p.position.y(), 0.00375, 1e-15);
  EXPECT_NEAR(p.position.x(), 0.0, 1e-15);
  EXPECT_NEAR(p.heading, kPi / 2 + 0.05, 1e-12);
  p = kinematics_step(at(0, 0, kPi / 2), Action::Right, {}, arena);
  EXPECT_NEAR(p.heading, kPi / 2 - 0.05, 1e-12);
}

TEST(Kinematics, FullCircleOfLeftTurns) {
  const auto arena = open_arena();
  auto p = at(0, 0, 0);
  const int n = static_cast<int>(std::round(2 * kPi / 0.05));
  for (int i = 0; i < n; ++i) p = kinematics_step(p, Action::Left, {}, arena);
  // Chord polygon of radius 0.00375 / 0.05 closes on itself.
  EXPECT_NEAR(p.position.norm(), 0.0, 0.01);
  EXPECT_LE(std::abs(p.heading), kPi);
}

TEST(Kinematics, StopsFlushAtWall) {
  const auto arena = open_arena();
  const RobotSpec spec;
  const auto p = kinematics_step(at(0, 1 - spec.radius - 0.001, kPi / 2), Action::Forward, spec, arena);
  EXPECT_NEAR(p.position.y(), 1 - spec.radius, 1e-8);
  EXPECT_LE(p.position.y(), 1 - spec.radius);
}

TEST(Kinematics, SlidesAlongWall) {
  const auto arena = open_arena();
  const RobotSpec spec;
  auto p = at(0, 1 - spec.radius, kPi / 4);
  p = kinematics_step(p, Action::Forward, spec, arena);
  EXPECT_NEAR(p.position.x(), 0.005 * std::cos(kPi / 4), 1e-8);
  EXPECT_LE(p.position.y(), 1 - spec.radius);
}

TEST(Kinematics, NeverPenetrates) {
  Rng rng(12);
  std::uniform_int_distribution<int> pick(0, 2);
  const RobotSpec spec;
  for (auto task : {TaskKind::Phototaxis, TaskKind::TMaze}) {
    const auto arena = build_arena(task);
    auto p = at(task == TaskKind::Phototaxis ? -0.8 : 0.0, -0.8, kPi / 2);
    for (int i = 0; i < 30000; ++i) {
      p = kinematics_step(p, static_cast<Action>(i % 97 < 60 ? 0 : pick(rng)), spec, arena);
      check_bump(p, arena, spec);
      ASSERT_TRUE(arena.in_free_space(p.position));
      ASSERT_GE(arena.clearance(p.position), spec.radius - 1e-9) << i;
    }
  }
}

TEST(Bump, NoContact) {
  const auto arena = open_arena();
  auto p = at(0, 0, kPi / 2);
  EXPECT_EQ(check_bump(p, arena, {}), BumpOutcome::None);
  EXPECT_EQ(p.steps, 0);
  EXPECT_EQ(p.position, Vec2(0, 0));
}

TEST(Bump, FrontalContactReverses) {
  const auto arena = open_arena();
  const RobotSpec spec;
  auto p = at(0.2, 1 - spec.radius, kPi / 2);
  EXPECT_EQ(check_bump(p, arena, spec), BumpOutcome::Reversal);
  EXPECT_NEAR(p.position.y(), 1 - spec.radius - 0.05, 1e-12);
  EXPECT_NEAR(p.position.x(), 0.2, 1e-12);
  EXPECT_EQ(p.steps, 10);
}

TEST(Bump, ContactBehindDoesNotTrigger) {
  const auto arena = open_arena();
  const RobotSpec spec;
  auto p = at(0.2, -1 + spec.radius, kPi / 2);
  EXPECT_EQ(check_bump(p, arena, spec), BumpOutcome::None);
  p = at(0.2, 1 - spec.radius, kPi / 2 - 1.2);  // wall 69 degrees off the heading
  EXPECT_EQ(check_bump(p, arena, spec), BumpOutcome::Reversal);
}

TEST(Bump, ReversalTruncatedByWallBehind) {
  auto arena = open_arena();
  arena.obstacles.emplace_back(Vec2(-1, -1), Vec2(1, 0.93));
  arena.walls.push_back({{-1, 0.93}, {1, 0.93}});
  const RobotSpec spec;
  auto p = at(0, 1 - spec.radius, kPi / 2);
  EXPECT_EQ(check_bump(p, arena, spec), BumpOutcome::Reversal);
  EXPECT_NEAR(p.position.y(), 0.93 + spec.radius, 1e-8);
  EXPECT_GE(p.position.y(), 0.93 + spec.radius);
  EXPECT_EQ(p.steps, 10);
}

TEST(Sensors, IrRange) {
  const auto arena = open_arena();
  const RobotSpec spec;
  auto r = sense_clean(at(0, 0, kPi / 2), arena, spec);
  for (double v : r.ir) EXPECT_EQ(v, 0.0);
  // Rear sensor 0.1 from the south wall: 1 - 0.1/0.2.
  r = sense_clean(at(0, -1 + 0.1 + spec.radius, kPi / 2), arena, spec);
  EXPECT_NEAR(r.ir[2], 0.5, 1e-12);
}

TEST(Sensors, LightFacingAwayReadsZero) {
  const auto photo = build_arena(TaskKind::Phototaxis);
  const auto r = sense_clean(at(0.7, 0.7, kPi / 4), photo, {});
  EXPECT_EQ(r.light[2], 0.0);
  EXPECT_GT(r.light[0], 0.0);
  EXPECT_GT(r.light[1], 0.0);
}

TEST(Sensors, OccludedLightReadsZero) {
  const auto photo = build_arena(TaskKind::Phototaxis);
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto r = sense(at(-0.7, -0.7, kPi / 4), photo, {}, rng);
    for (double v : r.light) EXPECT_EQ(v, 0.0);
  }
}

TEST(Sensors, LightGrowsOnApproach) {
  const auto photo = build_arena(TaskKind::Phototaxis);
  double prev = -1.0;
  for (double t = 0.45; t < 0.95; t += 0.01) {
    const auto r = sense_clean(at(t, t, 0.0), photo, {});
    EXPECT_GE(r.light[0], prev);
    prev = r.light[0];
  }
  EXPECT_GT(prev, 0.5);
}

TEST(Sensors, AlwaysInUnitRange) {
  Rng rng(77);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (auto task : {TaskKind::Phototaxis, TaskKind::TMaze}) {
    const auto arena = build_arena(task);
    const RobotSpec spec;
    for (int i = 0; i < 2000; ++i) {
      const auto pose = at(0, 0, angle(rng));
      RobotPose p = pose;
      p.position = random_free_point(arena, rng, spec.radius);
      const auto r = sense(p, arena, spec, rng);
      for (double v : r.light) ASSERT_TRUE(v >= 0.0 && v <= 1.0);
      for (double v : r.ir) ASSERT_TRUE(v >= 0.0 && v <= 1.0);
    }
  }
}

TEST(Sensors, NoiseSpreadAndMean) {
  const auto arena = open_arena();
  const RobotSpec spec;
  const auto pose = at(0, 0.87, kPi / 2);
  const auto clean = sense_clean(pose, arena, spec);
  ASSERT_GT(clean.ir[0], 0.05);
  ASSERT_LT(clean.ir[0], 0.9);
  ASSERT_GT(clean.light[1], 0.05);
  ASSERT_LT(clean.light[1], 0.85);
  Rng rng(4);
  double ir_sum = 0, light_sum = 0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    const auto r = sense(pose, arena, spec, rng);
    ASSERT_LE(std::abs(r.ir[0] / clean.ir[0] - 1.0), 0.02 + 1e-12);
    ASSERT_LE(std::abs(r.light[1] / clean.light[1] - 1.0), 0.10 + 1e-12);
    ir_sum += r.ir[0];
    light_sum += r.light[1];
  }
  EXPECT_NEAR(ir_sum / n, clean.ir[0], clean.ir[0] * 0.001);
  EXPECT_NEAR(light_sum / n, clean.light[1], clean.light[1] * 0.003);
}
