#pragma once

#include <array>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "memsnn/neuro.hpp"

namespace memsnn {

using Rng = std::mt19937_64;
using Vec2 = Eigen::Vector2d;
using Box2 = Eigen::AlignedBox2d;

enum class TaskKind { Phototaxis, TMaze };

struct Segment {
  Vec2 a;
  Vec2 b;
};

// Axis-aligned region or half-plane on x + y.
struct Zone {
  enum class Shape { Box, SumAbove, SumBelow };
  Shape shape = Shape::Box;
  Box2 box;
  double threshold = 0.0;

  static Zone rect(Vec2 lo, Vec2 hi) { return {Shape::Box, Box2(lo, hi), 0.0}; }
  static Zone sum_above(double t) { return {Shape::SumAbove, Box2(), t}; }
  static Zone sum_below(double t) { return {Shape::SumBelow, Box2(), t}; }

  bool contains(const Vec2& p) const;
};

struct ArenaSpec {
  TaskKind task = TaskKind::Phototaxis;
  Box2 bounds;
  std::vector<Box2> obstacles;
  std::vector<Segment> walls;  // outer boundary + obstacle faces
  Vec2 light = Vec2::Zero();
  double light_intensity = 1.0;
  Zone start;
  Zone goal;      // phototaxis goal
  Zone reward_1;  // T-maze R1
  Zone reward_2;  // T-maze R2

  // Point (not body) lies inside the bounds and outside every obstacle.
  bool in_free_space(const Vec2& p) const;
  // Minimum distance from p to any wall segment.
  double clearance(const Vec2& p) const;
};

ArenaSpec build_arena(TaskKind task);

struct RobotSpec {
  double radius = 0.03;
  double axle = 0.05;
  double v_full = 0.005;
  std::array<double, 3> sensor_bearings{std::numbers::pi / 4, -std::numbers::pi / 4,
                                        std::numbers::pi};
  double ir_range = 0.2;
  double light_half_distance = 0.5;
  double ir_noise = 0.02;
  double light_noise = 0.10;
  double bump_reverse = 0.05;
  int bump_penalty = 10;

  friend bool operator==(const RobotSpec&, const RobotSpec&) = default;
  void validate() const;
};

struct RobotPose {
  Vec2 position = Vec2::Zero();
  double heading = std::numbers::pi / 2;  // radians CCW from +x; North = pi/2
  int steps = 0;

  Vec2 forward() const { return {std::cos(heading), std::sin(heading)}; }
};

struct SensorReading {
  std::array<double, 3> light{};
  std::array<double, 3> ir{};
};

inline constexpr double kNoHit = std::numeric_limits<double>::infinity();

double distance_to_segment(const Vec2& p, const Segment& s);

// Distance along a unit direction to the nearest wall, kNoHit if none.
double raycast(const Vec2& origin, const Vec2& direction, const ArenaSpec& arena);

// True when the open segment from -> to (excluding a small neighbourhood of
// `to`) crosses a wall.
bool segment_blocked(const Vec2& from, const Vec2& to, const ArenaSpec& arena);

// Largest fraction in [0, 1] of `displacement` a disc of `radius` at
// `center` can travel before touching a wall.
double sweep_fraction(const Vec2& center, const Vec2& displacement, double radius,
                      const ArenaSpec& arena);

// Moves the body by `displacement`, stopping flush at walls and sliding the
// remainder along the contacted wall when `slide` is set.
Vec2 move_body(const Vec2& center, const Vec2& displacement, double radius,
               const ArenaSpec& arena, bool slide);

RobotPose kinematics_step(const RobotPose& pose, Action action, const RobotSpec& spec,
                          const ArenaSpec& arena);

// Noise-free readings, each in [0, 1].
SensorReading sense_clean(const RobotPose& pose, const ArenaSpec& arena, const RobotSpec& spec);
SensorReading sense(const RobotPose& pose, const ArenaSpec& arena, const RobotSpec& spec,
                    Rng& rng);

enum class BumpOutcome { None, Reversal };

// Frontal contact reverses the robot bump_reverse units and charges
// bump_penalty robot steps.
BumpOutcome check_bump(RobotPose& pose, const ArenaSpec& arena, const RobotSpec& spec);

}  // namespace memsnn
