#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "memsnn/genome.hpp"
#include "memsnn/neuro.hpp"
#include "memsnn/sim.hpp"

namespace memsnn {

struct TrialConfig {
  int max_steps = 8000;
  int phase_steps = 4000;
  int retests = 5;
  double goal_bonus = 2500.0;
  double fitness_scale = 1000.0;
  double goal_sum = 1.6;
  double denominator_floor = 0.1;

  friend bool operator==(const TrialConfig&, const TrialConfig&) = default;
  void validate() const;
};

struct TaskSetup {
  NeuronParams neuron;
  SynapseParams synapse;
  RobotSpec robot;
  TrialConfig trial;

  friend bool operator==(const TaskSetup&, const TaskSetup&) = default;
  void validate() const;
};

struct TrialResult {
  double fitness = 0.0;
  int steps = 0;
  bool solved = false;
  int phase1_steps = 0;  // T-maze only
  int phase2_steps = 0;
  std::vector<bool> retest_outcomes;  // phase-1 retests then phase-2 retests

  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

struct TraceRow {
  int phase = 0;  // 0 for phototaxis, 1 or 2 for the T-maze
  int run = 0;    // 0 = attempt, 1.. = retests
  int robot_step = 0;
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  Action action = Action::Forward;
  double f = 0.0;
};

struct TrialHooks {
  std::function<void(const TraceRow&)> on_step;
  std::function<void(int phase, int run)> on_run_start;
  std::function<void(int phase, int run, bool reached)> on_run_end;
};

using Controller = std::function<Action(const SensorInputs&)>;

// 1000 / max(0.1, 1.6 - (x + y)) - st, with the signed coordinate sum.
double phototaxis_step_fitness(double x, double y, int steps, const TrialConfig& config = {});

// Total robot steps over both phases. A phase that was not completed counts
// as the full phase cap; never reaching R1 scores max_steps.
double tmaze_fitness(bool phase1_done, int phase1_steps, bool phase2_done, int phase2_steps,
                     const TrialConfig& config = {});

// Light readings feed input neurons 0-2, IR readings 3-5.
SensorInputs scale_inputs(const SensorReading& reading);

// Uniform start pose in the arena's start zone, facing North, body clear of walls.
RobotPose random_start(const ArenaSpec& arena, const RobotSpec& robot, Rng& rng);

TrialResult run_phototaxis(const Controller& controller, std::uint64_t seed,
                           const TaskSetup& setup = {}, const TrialHooks& hooks = {});
TrialResult run_tmaze(const Controller& controller, std::uint64_t seed,
                      const TaskSetup& setup = {}, const TrialHooks& hooks = {});

TrialResult run_phototaxis_trial(const Genome& genome, std::uint64_t seed,
                                 const TaskSetup& setup = {}, const TrialHooks& hooks = {});
TrialResult run_tmaze_trial(const Genome& genome, std::uint64_t seed,
                            const TaskSetup& setup = {}, const TrialHooks& hooks = {});
TrialResult run_trial(TaskKind task, const Genome& genome, std::uint64_t seed,
                      const TaskSetup& setup = {}, const TrialHooks& hooks = {});

}  // namespace memsnn
