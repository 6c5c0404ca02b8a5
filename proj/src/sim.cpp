#include "memsnn/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace memsnn {
namespace {

constexpr double kSkin = 1e-9;         // gap left between a stopped body and the wall
constexpr double kContactTol = 1e-6;   // body-wall gap still counted as touching

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

Vec2 closest_point(const Vec2& p, const Segment& s) {
  const Vec2 ab = s.b - s.a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return s.a;
  const double t = std::clamp((p - s.a).dot(ab) / len2, 0.0, 1.0);
  return s.a + t * ab;
}

// First time in [0, 1] at which a point moving o -> o + d comes within r of
// the segment; infinity if it never does. A point already inside the capsule
// and moving deeper hits at 0.
double capsule_time_of_impact(const Vec2& o, const Vec2& d, double r, const Segment& s) {
  double best = kNoHit;
  const Vec2 ab = s.b - s.a;
  const double len = ab.norm();
  if (len > 0.0) {
    const Vec2 u = ab / len;
    const Vec2 n(-u.y(), u.x());
    const double s0 = n.dot(o - s.a);
    const double nd = n.dot(d);
    const double along0 = u.dot(o - s.a);
    if (std::abs(s0) < r) {
      if (along0 >= 0.0 && along0 <= len && s0 * nd < 0.0) return 0.0;
    } else if (s0 * nd < 0.0) {
      const double target = s0 > 0.0 ? r : -r;
      const double t = (target - s0) / nd;
      const double along = u.dot(o + t * d - s.a);
      if (t >= 0.0 && t <= 1.0 && along >= 0.0 && along <= len) best = t;
    }
  }
  const double a2 = d.squaredNorm();
  for (const Vec2* e : {&s.a, &s.b}) {
    const Vec2 f = o - *e;
    const double b2 = 2.0 * f.dot(d);
    const double c2 = f.squaredNorm() - r * r;
    if (c2 < 0.0) {
      if (b2 < 0.0) return 0.0;
      continue;
    }
    if (a2 == 0.0) continue;
    const double disc = b2 * b2 - 4.0 * a2 * c2;
    if (disc < 0.0) continue;
    const double t = (-b2 - std::sqrt(disc)) / (2.0 * a2);
    if (t >= 0.0 && t <= 1.0) best = std::min(best, t);
  }
  return best;
}

void add_box_walls(std::vector<Segment>& walls, const Box2& box) {
  const Vec2 lo = box.min(), hi = box.max();
  const Vec2 c1(lo.x(), lo.y()), c2(hi.x(), lo.y()), c3(hi.x(), hi.y()), c4(lo.x(), hi.y());
  walls.push_back({c1, c2});
  walls.push_back({c2, c3});
  walls.push_back({c3, c4});
  walls.push_back({c4, c1});
}

}  // namespace

bool Zone::contains(const Vec2& p) const {
  switch (shape) {
    case Shape::Box: return box.contains(p);
    case Shape::SumAbove: return p.x() + p.y() > threshold;
    case Shape::SumBelow: return p.x() + p.y() < threshold;
  }
  return false;
}

bool ArenaSpec::in_free_space(const Vec2& p) const {
  if (!bounds.contains(p)) return false;
  for (const auto& o : obstacles) {
    const bool strictly_inside = (p.array() > o.min().array()).all() &&
                                 (p.array() < o.max().array()).all();
    if (strictly_inside) return false;
  }
  return true;
}

double ArenaSpec::clearance(const Vec2& p) const {
  double best = kNoHit;
  for (const auto& w : walls) best = std::min(best, distance_to_segment(p, w));
  return best;
}

ArenaSpec build_arena(TaskKind task) {
  ArenaSpec arena;
  arena.task = task;
  arena.bounds = Box2(Vec2(-1, -1), Vec2(1, 1));
  if (task == TaskKind::Phototaxis) {
    arena.obstacles.emplace_back(Vec2(-0.4, -0.4), Vec2(0.4, 0.4));
    arena.light = Vec2(1, 1);
    arena.start = Zone::sum_below(-1.5);
    arena.goal = Zone::sum_above(1.6);
  } else {
    // Free space is the stem |x| <= 0.4, y <= 0.2 plus the crossbar y >= 0.2.
    arena.obstacles.emplace_back(Vec2(-1, -1), Vec2(-0.4, 0.2));
    arena.obstacles.emplace_back(Vec2(0.4, -1), Vec2(1, 0.2));
    arena.light = Vec2(0.5, 1);
    arena.start = Zone::rect(Vec2(-0.4, -1), Vec2(0.4, -0.4));
    arena.reward_1 = Zone::rect(Vec2(-1, 0.2), Vec2(-0.8, 1));
    arena.reward_2 = Zone::rect(Vec2(0.8, 0.2), Vec2(1, 1));
  }
  add_box_walls(arena.walls, arena.bounds);
  for (const auto& o : arena.obstacles) add_box_walls(arena.walls, o);
  return arena;
}

void RobotSpec::validate() const {
  if (!(radius > 0 && axle > 0 && v_full > 0 && ir_range > 0 && light_half_distance > 0))
    throw std::invalid_argument("robot: lengths must be positive");
  if (!(ir_noise >= 0 && light_noise >= 0 && bump_reverse >= 0 && bump_penalty >= 0))
    throw std::invalid_argument("robot: noise, reversal and penalty must be non-negative");
}

double distance_to_segment(const Vec2& p, const Segment& s) { return (p - closest_point(p, s)).norm(); }

double raycast(const Vec2& origin, const Vec2& direction, const ArenaSpec& arena) {
  double best = kNoHit;
  for (const auto& w : arena.walls) {
    const Vec2 e = w.b - w.a;
    const double denom = cross(direction, e);
    if (denom == 0.0) continue;
    const Vec2 ao = w.a - origin;
    const double t = cross(ao, e) / denom;
    const double s = cross(ao, direction) / denom;
    if (t >= 0.0 && s >= 0.0 && s <= 1.0) best = std::min(best, t);
  }
  return best;
}

bool segment_blocked(const Vec2& from, const Vec2& to, const ArenaSpec& arena) {
  const Vec2 d = to - from;
  const double len = d.norm();
  if (len == 0.0) return false;
  const double t_max = 1.0 - 1e-6 / len;
  for (const auto& w : arena.walls) {
    const Vec2 e = w.b - w.a;
    const double denom = cross(d, e);
    if (denom == 0.0) continue;
    const Vec2 ao = w.a - from;
    const double t = cross(ao, e) / denom;
    const double s = cross(ao, d) / denom;
    if (t > 0.0 && t < t_max && s >= 0.0 && s <= 1.0) return true;
  }
  return false;
}

double sweep_fraction(const Vec2& center, const Vec2& displacement, double radius,
                      const ArenaSpec& arena) {
  const double dist = displacement.norm();
  if (dist == 0.0) return 0.0;
  double t = 1.0;
  for (const auto& w : arena.walls)
    t = std::min(t, capsule_time_of_impact(center, displacement, radius + kSkin, w));
  return std::max(0.0, t);
}

Vec2 move_body(const Vec2& center, const Vec2& displacement, double radius,
               const ArenaSpec& arena, bool slide) {
  const double t = sweep_fraction(center, displacement, radius, arena);
  const Vec2 stopped = center + t * displacement;
  if (t >= 1.0 || !slide) return stopped;

  Vec2 remainder = (1.0 - t) * displacement;
  for (const auto& w : arena.walls) {
    const Vec2 q = closest_point(stopped, w);
    const Vec2 gap = stopped - q;
    const double g = gap.norm();
    if (g > radius + kContactTol || g == 0.0) continue;
    const Vec2 n = gap / g;
    const double into = remainder.dot(n);
    if (into < 0.0) remainder -= into * n;
  }
  if (remainder.squaredNorm() == 0.0) return stopped;
  const double t2 = sweep_fraction(stopped, remainder, radius, arena);
  return stopped + t2 * remainder;
}

RobotPose kinematics_step(const RobotPose& pose, Action action, const RobotSpec& spec,
                          const ArenaSpec& arena) {
  double left = spec.v_full, right = spec.v_full;
  if (action == Action::Left) left *= 0.5;
  if (action == Action::Right) right *= 0.5;
  const double advance = 0.5 * (left + right);
  const double turn = (right - left) / spec.axle;

  RobotPose next = pose;
  next.position = move_body(pose.position, advance * pose.forward(), spec.radius, arena, true);
  next.heading = std::remainder(pose.heading + turn, 2.0 * std::numbers::pi);
  return next;
}

SensorReading sense_clean(const RobotPose& pose, const ArenaSpec& arena, const RobotSpec& spec) {
  SensorReading r;
  for (std::size_t i = 0; i < spec.sensor_bearings.size(); ++i) {
    const double bearing = pose.heading + spec.sensor_bearings[i];
    const Vec2 dir(std::cos(bearing), std::sin(bearing));
    const Vec2 mount = pose.position + spec.radius * dir;

    const double hit = raycast(mount, dir, arena);
    r.ir[i] = std::max(0.0, 1.0 - hit / spec.ir_range);

    const Vec2 to_light = arena.light - mount;
    const double d = to_light.norm();
    if (d == 0.0) {
      r.light[i] = 1.0;
    } else if (!segment_blocked(mount, arena.light, arena)) {
      const double cos_alpha = dir.dot(to_light) / d;
      const double q = d / spec.light_half_distance;
      const double falloff = std::min(1.0, 1.0 / (1.0 + q * q));
      r.light[i] = std::clamp(arena.light_intensity * std::max(0.0, cos_alpha) * falloff, 0.0, 1.0);
    }
  }
  return r;
}

SensorReading sense(const RobotPose& pose, const ArenaSpec& arena, const RobotSpec& spec,
                    Rng& rng) {
  SensorReading r = sense_clean(pose, arena, spec);
  std::uniform_real_distribution<double> light_noise(-spec.light_noise, spec.light_noise);
  std::uniform_real_distribution<double> ir_noise(-spec.ir_noise, spec.ir_noise);
  for (auto& v : r.light) v = std::clamp(v * (1.0 + light_noise(rng)), 0.0, 1.0);
  for (auto& v : r.ir) v = std::clamp(v * (1.0 + ir_noise(rng)), 0.0, 1.0);
  return r;
}

BumpOutcome check_bump(RobotPose& pose, const ArenaSpec& arena, const RobotSpec& spec) {
  const Vec2 fwd = pose.forward();
  bool contact = false;
  for (const auto& w : arena.walls) {
    const Vec2 toward = closest_point(pose.position, w) - pose.position;
    const double g = toward.norm();
    if (g > spec.radius + kContactTol) continue;
    if (g == 0.0 || fwd.dot(toward) / g > 1e-6) {
      contact = true;
      break;
    }
  }
  if (!contact) return BumpOutcome::None;
  pose.position = move_body(pose.position, -spec.bump_reverse * fwd, spec.radius, arena, false);
  pose.steps += spec.bump_penalty;
  return BumpOutcome::Reversal;
}

}  // namespace memsnn
