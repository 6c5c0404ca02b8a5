#include "memsnn/tasks.hpp"

#include <algorithm>
#include <stdexcept>

namespace memsnn {

void TrialConfig::validate() const {
  if (max_steps < 1 || phase_steps < 1) throw std::invalid_argument("trial: step caps must be >= 1");
  if (phase_steps * 2 != max_steps)
    throw std::invalid_argument("trial: phase_steps * 2 must equal max_steps");
  if (retests < 0) throw std::invalid_argument("trial: retests must be >= 0");
  if (!(denominator_floor > 0)) throw std::invalid_argument("trial: denominator_floor must be > 0");
}

void TaskSetup::validate() const {
  neuron.validate();
  synapse.validate();
  robot.validate();
  trial.validate();
}

double phototaxis_step_fitness(double x, double y, int steps, const TrialConfig& config) {
  const double gap = std::max(config.denominator_floor, config.goal_sum - (x + y));
  return config.fitness_scale / gap - steps;
}

double tmaze_fitness(bool phase1_done, int phase1_steps, bool phase2_done, int phase2_steps,
                     const TrialConfig& config) {
  if (!phase1_done) return config.max_steps;
  return std::min(phase1_steps, config.phase_steps) +
         (phase2_done ? std::min(phase2_steps, config.phase_steps) : config.phase_steps);
}

SensorInputs scale_inputs(const SensorReading& reading) {
  SensorInputs in{};
  for (std::size_t i = 0; i < 3; ++i) {
    in[i] = std::clamp(reading.light[i], 0.0, 1.0);
    in[3 + i] = std::clamp(reading.ir[i], 0.0, 1.0);
  }
  return in;
}

RobotPose random_start(const ArenaSpec& arena, const RobotSpec& robot, Rng& rng) {
  Box2 region = arena.bounds;
  if (arena.start.shape == Zone::Shape::Box) region = region.intersection(arena.start.box);
  std::uniform_real_distribution<double> ux(region.min().x() + robot.radius,
                                            region.max().x() - robot.radius);
  std::uniform_real_distribution<double> uy(region.min().y() + robot.radius,
                                            region.max().y() - robot.radius);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const Vec2 p(ux(rng), uy(rng));
    if (arena.start.contains(p) && arena.in_free_space(p) && arena.clearance(p) > robot.radius) {
      RobotPose pose;
      pose.position = p;
      return pose;
    }
  }
  throw std::runtime_error("random_start: start zone has no free placement");
}

namespace {

struct LegOutcome {
  bool reached = false;
  int steps = 0;
};

// One robot-step loop towards `target`, capped at `cap` robot steps.
LegOutcome run_leg(const Controller& controller, const ArenaSpec& arena, const Zone& target,
                   int cap, const TaskSetup& setup, Rng& rng, int phase, int run,
                   const TrialHooks& hooks) {
  RobotPose pose = random_start(arena, setup.robot, rng);
  if (hooks.on_run_start) hooks.on_run_start(phase, run);
  LegOutcome out;
  while (pose.steps < cap) {
    const Action action = controller(scale_inputs(sense(pose, arena, setup.robot, rng)));
    pose = kinematics_step(pose, action, setup.robot, arena);
    ++pose.steps;
    check_bump(pose, arena, setup.robot);
    pose.steps = std::min(pose.steps, cap);
    const bool reached = target.contains(pose.position);
    if (hooks.on_step)
      hooks.on_step({phase, run, pose.steps, pose.position.x(), pose.position.y(), pose.heading,
                     action, static_cast<double>(pose.steps)});
    if (reached) {
      out.reached = true;
      break;
    }
  }
  out.steps = out.reached ? pose.steps : cap;
  if (hooks.on_run_end) hooks.on_run_end(phase, run, out.reached);
  return out;
}

}  // namespace

TrialResult run_phototaxis(const Controller& controller, std::uint64_t seed, const TaskSetup& setup,
                           const TrialHooks& hooks) {
  static const ArenaSpec arena = build_arena(TaskKind::Phototaxis);
  const auto& cfg = setup.trial;
  Rng rng(seed);
  RobotPose pose = random_start(arena, setup.robot, rng);
  if (hooks.on_run_start) hooks.on_run_start(0, 0);

  double best = phototaxis_step_fitness(pose.position.x(), pose.position.y(), 0, cfg);
  bool reached = false;
  while (pose.steps < cfg.max_steps) {
    const Action action = controller(scale_inputs(sense(pose, arena, setup.robot, rng)));
    pose = kinematics_step(pose, action, setup.robot, arena);
    ++pose.steps;
    check_bump(pose, arena, setup.robot);
    pose.steps = std::min(pose.steps, cfg.max_steps);
    const double f = phototaxis_step_fitness(pose.position.x(), pose.position.y(), pose.steps, cfg);
    best = std::max(best, f);
    if (hooks.on_step)
      hooks.on_step({0, 0, pose.steps, pose.position.x(), pose.position.y(), pose.heading, action, f});
    if (arena.goal.contains(pose.position)) {
      reached = true;
      break;
    }
  }
  if (hooks.on_run_end) hooks.on_run_end(0, 0, reached);

  TrialResult r;
  r.fitness = best + (reached ? cfg.goal_bonus : 0.0);
  r.steps = pose.steps;
  r.solved = reached;
  return r;
}

TrialResult run_tmaze(const Controller& controller, std::uint64_t seed, const TaskSetup& setup,
                      const TrialHooks& hooks) {
  static const ArenaSpec arena = build_arena(TaskKind::TMaze);
  const auto& cfg = setup.trial;
  Rng rng(seed);
  TrialResult r;

  // Attempt plus retests; a failed run counts as the full phase cap and the
  // phase reports its worst run.
  auto run_phase = [&](int phase, const Zone& target, bool& all_reached) {
    const auto first = run_leg(controller, arena, target, cfg.phase_steps, setup, rng, phase, 0, hooks);
    all_reached = first.reached;
    int worst = first.steps;
    if (!first.reached) return std::pair{false, worst};
    for (int k = 1; k <= cfg.retests; ++k) {
      const auto again = run_leg(controller, arena, target, cfg.phase_steps, setup, rng, phase, k, hooks);
      r.retest_outcomes.push_back(again.reached);
      all_reached = all_reached && again.reached;
      worst = std::max(worst, again.steps);
    }
    return std::pair{true, worst};
  };

  bool phase1_ok = false, phase2_ok = false;
  const auto [r1_found, p1_steps] = run_phase(1, arena.reward_1, phase1_ok);
  r.phase1_steps = p1_steps;
  if (!r1_found) {
    r.phase2_steps = cfg.phase_steps;
    r.fitness = tmaze_fitness(false, 0, false, 0, cfg);
    r.steps = cfg.max_steps;
    return r;
  }
  const auto [r2_found, p2_steps] = run_phase(2, arena.reward_2, phase2_ok);
  r.phase2_steps = r2_found && phase2_ok ? p2_steps : cfg.phase_steps;
  r.steps = r.phase1_steps + r.phase2_steps;
  r.fitness = tmaze_fitness(true, r.phase1_steps, r2_found && phase2_ok, r.phase2_steps, cfg);
  r.solved = phase1_ok && phase2_ok;
  return r;
}

TrialResult run_phototaxis_trial(const Genome& genome, std::uint64_t seed, const TaskSetup& setup,
                                 const TrialHooks& hooks) {
  Network net(genome, setup.neuron, setup.synapse);
  return run_phototaxis([&](const SensorInputs& in) { return net.robot_step(in).action; }, seed,
                        setup, hooks);
}

TrialResult run_tmaze_trial(const Genome& genome, std::uint64_t seed, const TaskSetup& setup,
                            const TrialHooks& hooks) {
  Network net(genome, setup.neuron, setup.synapse);
  return run_tmaze([&](const SensorInputs& in) { return net.robot_step(in).action; }, seed, setup,
                   hooks);
}

TrialResult run_trial(TaskKind task, const Genome& genome, std::uint64_t seed,
                      const TaskSetup& setup, const TrialHooks& hooks) {
  return task == TaskKind::Phototaxis ? run_phototaxis_trial(genome, seed, setup, hooks)
                                      : run_tmaze_trial(genome, seed, setup, hooks);
}

}  // namespace memsnn
