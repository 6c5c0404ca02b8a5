#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "memsnn/evolve.hpp"
#include "memsnn/sim.hpp"
#include "memsnn/stats.hpp"
#include "memsnn/tasks.hpp"

namespace memsnn {

struct GenerationStats {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  double mean_nodes = 0.0;         // neurons (all layers) with >= 1 incident connection
  double mean_connectivity = 0.0;  // percent of possible sites enabled
  MutationRates mean_rates;
  bool solved = false;  // some member has solved the task at or before this generation
};

int connected_nodes(const Genome& genome);
double connectivity_percent(const Genome& genome);

GenerationStats summarize_generation(const Population& pop);

Objective objective_for(TaskKind task);

struct ExperimentConfig {
  TaskKind task = TaskKind::Phototaxis;
  std::vector<SynapseKind> kinds{SynapseKind::Unipolar, SynapseKind::Bipolar,
                                 SynapseKind::Constant};
  int repeats = 30;
  int generations = 1000;
  std::uint64_t base_seed = 1;
  int threads = 0;  // 0 = hardware concurrency
  TaskSetup setup;
  EvolveParams evolve;

  void validate() const;
};

struct RepeatResult {
  std::vector<GenerationStats> series;  // one row per GA generation, 1..generations
  std::optional<int> gens_to_solve;     // 0 = solved in the initial population
  Genome best;
};

// Per-kind aggregates over repeats, final-generation values.
struct KindSummary {
  SynapseKind kind = SynapseKind::Constant;
  int repeats = 0;
  int solved_repeats = 0;
  double median_gens_to_solve = 0.0;
  struct Cell {
    double mean = 0.0;
    double sd = 0.0;
  };
  // Keyed by metric name in kMetricNames order.
  std::vector<Cell> cells;
};

struct TTestRow {
  std::string metric;
  SynapseKind a = SynapseKind::Unipolar;
  SynapseKind b = SynapseKind::Bipolar;
  WelchResult result;
  double mean_a = 0.0;
  double mean_b = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<std::vector<RepeatResult>> runs;  // [kind][repeat]
  std::vector<KindSummary> summaries;
  std::vector<TTestRow> ttests;  // empty when repeats < 2
};

// best_f, avg_f, gens_to_solve, nodes, connectivity_pct, mu, psi, omega, tau
extern const std::vector<std::string> kMetricNames;

// Per-repeat final value of a metric; unsolved repeats contribute the
// generation budget to gens_to_solve.
std::vector<double> metric_samples(const ExperimentReport& report, std::size_t kind_index,
                                   const std::string& metric);

std::uint64_t repeat_seed(std::uint64_t base_seed, int repeat);

RepeatResult run_repeat(const ExperimentConfig& config, SynapseKind kind, int repeat);

ExperimentReport run_experiment(const ExperimentConfig& config);

// CSV emission. All writers produce a header row and fixed number formatting.
void write_generations_csv(std::ostream& out, const ExperimentReport& report);
void write_summary_csv(std::ostream& out, const ExperimentReport& report);
void write_ttests_csv(std::ostream& out, const ExperimentReport& report);
void print_summary(std::ostream& out, const ExperimentReport& report);

std::string format_number(double value);

// Writes `contents` to `<path>.partial` then renames to `path`. Throws
// std::runtime_error if the file cannot be written.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

// robot_step,x,y,heading,action,f (plus phase,run columns for the T-maze).
void write_trajectory_csv(std::ostream& out, TaskKind task, const Genome& genome,
                          std::uint64_t seed, const TaskSetup& setup, TrialResult* result = nullptr);

// One row per synapse per robot step: cumulative switch counts and weights.
void write_synapse_activity_csv(std::ostream& out, TaskKind task, const Genome& genome,
                                std::uint64_t seed, const TaskSetup& setup,
                                TrialResult* result = nullptr);

}  // namespace memsnn
