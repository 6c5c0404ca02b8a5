#include "memsnn/lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace memsnn {

const std::vector<std::string> kMetricNames{"best_f", "avg_f", "gens_to_solve", "nodes",
                                            "connectivity_pct", "mu", "psi", "omega", "tau"};

int connected_nodes(const Genome& genome) {
  std::vector<NeuronRef> touched;
  touched.reserve(2 * genome.connections.size());
  for (const auto& c : genome.connections) {
    touched.push_back(c.site.pre);
    touched.push_back(c.site.post);
  }
  std::sort(touched.begin(), touched.end());
  return static_cast<int>(std::unique(touched.begin(), touched.end()) - touched.begin());
}

double connectivity_percent(const Genome& genome) {
  const auto possible = site_count(genome.hidden_count());
  if (possible == 0) return 0.0;
  return 100.0 * static_cast<double>(genome.connections.size()) / static_cast<double>(possible);
}

GenerationStats summarize_generation(const Population& pop) {
  GenerationStats s;
  s.generation = pop.generation;
  if (pop.members.empty()) return s;
  s.best_fitness = pop.best().fitness;
  const double n = static_cast<double>(pop.members.size());
  for (const auto& m : pop.members) {
    const auto& g = m.genome;
    s.mean_fitness += g.fitness / n;
    s.mean_nodes += connected_nodes(g) / n;
    s.mean_connectivity += connectivity_percent(g) / n;
    s.mean_rates.mu += g.rates.mu / n;
    s.mean_rates.psi += g.rates.psi / n;
    s.mean_rates.omega += g.rates.omega / n;
    s.mean_rates.tau += g.rates.tau / n;
  }
  s.solved = pop.any_solved();
  return s;
}

Objective objective_for(TaskKind task) {
  return task == TaskKind::Phototaxis ? Objective::Maximize : Objective::Minimize;
}

void ExperimentConfig::validate() const {
  if (kinds.empty()) throw std::invalid_argument("experiment: at least one synapse kind required");
  if (repeats < 1) throw std::invalid_argument("experiment: repeats must be >= 1");
  if (generations < 1) throw std::invalid_argument("experiment: generations must be >= 1");
  if (threads < 0) throw std::invalid_argument("experiment: threads must be >= 0");
  auto sorted = kinds;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("experiment: duplicate synapse kind");
  setup.validate();
  evolve.validate();
}

std::uint64_t repeat_seed(std::uint64_t base_seed, int repeat) {
  return base_seed ^ static_cast<std::uint64_t>(repeat);
}

RepeatResult run_repeat(const ExperimentConfig& config, SynapseKind kind, int repeat) {
  const std::uint64_t seed = repeat_seed(config.base_seed, repeat);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(kind)};
  Rng rng(seq);

  EvolveParams evolve = config.evolve;
  evolve.synapse = config.setup.synapse;
  evolve.fitness_ceiling = config.setup.trial.max_steps;

  const TaskKind task = config.task;
  const TaskSetup& setup = config.setup;
  const Evaluator evaluate = [task, &setup](const Genome& g, std::uint64_t trial_seed) {
    const auto r = run_trial(task, g, trial_seed, setup);
    return Evaluation{r.fitness, r.solved};
  };

  RepeatResult out;
  Population pop = init_population(kind, objective_for(task), evaluate, rng, evolve);
  if (pop.any_solved()) out.gens_to_solve = 0;
  out.series.reserve(config.generations);
  for (int g = 0; g < config.generations; ++g) {
    ga_generation(pop, evaluate, rng, evolve);
    if (!out.gens_to_solve && pop.any_solved()) out.gens_to_solve = pop.generation;
    auto stats = summarize_generation(pop);
    stats.solved = out.gens_to_solve.has_value();
    out.series.push_back(stats);
  }
  out.best = pop.best_ever;
  return out;
}

std::vector<double> metric_samples(const ExperimentReport& report, std::size_t kind_index,
                                   const std::string& metric) {
  std::vector<double> xs;
  for (const auto& rep : report.runs.at(kind_index)) {
    const auto& last = rep.series.back();
    if (metric == "best_f") xs.push_back(last.best_fitness);
    else if (metric == "avg_f") xs.push_back(last.mean_fitness);
    else if (metric == "gens_to_solve")
      xs.push_back(rep.gens_to_solve ? *rep.gens_to_solve : report.config.generations);
    else if (metric == "nodes") xs.push_back(last.mean_nodes);
    else if (metric == "connectivity_pct") xs.push_back(last.mean_connectivity);
    else if (metric == "mu") xs.push_back(last.mean_rates.mu);
    else if (metric == "psi") xs.push_back(last.mean_rates.psi);
    else if (metric == "omega") xs.push_back(last.mean_rates.omega);
    else if (metric == "tau") xs.push_back(last.mean_rates.tau);
    else throw std::invalid_argument("unknown metric '" + metric + "'");
  }
  return xs;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.config = config;
  const int kinds = static_cast<int>(config.kinds.size());
  report.runs.assign(kinds, std::vector<RepeatResult>(config.repeats));

  const int jobs = kinds * config.repeats;
  int threads = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, jobs);

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int job = next++; job < jobs; job = next++) {
      const int k = job / config.repeats, r = job % config.repeats;
      try {
        report.runs[k][r] = run_repeat(config, config.kinds[k], r);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (int k = 0; k < kinds; ++k) {
    KindSummary s;
    s.kind = config.kinds[k];
    s.repeats = config.repeats;
    for (const auto& rep : report.runs[k]) s.solved_repeats += rep.gens_to_solve.has_value();
    for (const auto& metric : kMetricNames) {
      const auto xs = metric_samples(report, k, metric);
      s.cells.push_back({mean(xs), population_stddev(xs)});
      if (metric == "gens_to_solve") s.median_gens_to_solve = median(xs);
    }
    report.summaries.push_back(std::move(s));
  }

  if (config.repeats >= 2) {
    for (int i = 0; i < kinds; ++i)
      for (int j = i + 1; j < kinds; ++j)
        for (const auto& metric : kMetricNames) {
          const auto xa = metric_samples(report, i, metric);
          const auto xb = metric_samples(report, j, metric);
          report.ttests.push_back(
              {metric, config.kinds[i], config.kinds[j], welch_t_test(xa, xb), mean(xa), mean(xb)});
        }
  }
  return report;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

void write_generations_csv(std::ostream& out, const ExperimentReport& report) {
  out << "kind,repeat,gen,best_f,avg_f,nodes,connectivity_pct,mu,psi,omega,tau,solved\n";
  for (std::size_t k = 0; k < report.runs.size(); ++k)
    for (std::size_t r = 0; r < report.runs[k].size(); ++r)
      for (const auto& s : report.runs[k][r].series)
        out << to_string(report.config.kinds[k]) << ',' << r << ',' << s.generation << ','
            << format_number(s.best_fitness) << ',' << format_number(s.mean_fitness) << ','
            << format_number(s.mean_nodes) << ',' << format_number(s.mean_connectivity) << ','
            << format_number(s.mean_rates.mu) << ',' << format_number(s.mean_rates.psi) << ','
            << format_number(s.mean_rates.omega) << ',' << format_number(s.mean_rates.tau) << ','
            << (s.solved ? 1 : 0) << '\n';
}

void write_summary_csv(std::ostream& out, const ExperimentReport& report) {
  out << "kind,repeats,solved_repeats,median_gens_to_solve";
  for (const auto& m : kMetricNames) out << ',' << m << "_mean," << m << "_sd";
  out << '\n';
  for (const auto& s : report.summaries) {
    out << to_string(s.kind) << ',' << s.repeats << ',' << s.solved_repeats << ','
        << format_number(s.median_gens_to_solve);
    for (const auto& c : s.cells) out << ',' << format_number(c.mean) << ',' << format_number(c.sd);
    out << '\n';
  }
}

void write_ttests_csv(std::ostream& out, const ExperimentReport& report) {
  out << "metric,kind_a,kind_b,mean_a,mean_b,t,df,p,significant\n";
  for (const auto& t : report.ttests)
    out << t.metric << ',' << to_string(t.a) << ',' << to_string(t.b) << ','
        << format_number(t.mean_a) << ',' << format_number(t.mean_b) << ','
        << format_number(t.result.t) << ',' << format_number(t.result.df) << ','
        << format_number(t.result.p) << ',' << (t.result.p < 0.05 ? 1 : 0) << '\n';
}

void print_summary(std::ostream& out, const ExperimentReport& report) {
  const auto& cfg = report.config;
  out << (cfg.task == TaskKind::Phototaxis ? "phototaxis" : "tmaze") << ": " << cfg.repeats
      << " repeats x " << cfg.generations << " generations, seed " << cfg.base_seed << "\n\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %18s %18s %16s %8s %12s %8s\n", "kind", "best fit",
                "avg fit", "gens to solve", "median", "connectivity", "nodes");
  out << line;
  for (const auto& s : report.summaries) {
    auto cell = [&](std::size_t i) { return s.cells[i]; };
    std::snprintf(line, sizeof line, "%-10s %9.1f (%6.1f) %9.1f (%6.1f) %7.2f (%6.2f) %8.1f %5.2f (%4.2f) %8.2f\n",
                  std::string(to_string(s.kind)).c_str(), cell(0).mean, cell(0).sd, cell(1).mean,
                  cell(1).sd, cell(2).mean, cell(2).sd, s.median_gens_to_solve, cell(4).mean,
                  cell(4).sd, cell(3).mean);
    out << line;
  }
  out << '\n';
  std::snprintf(line, sizeof line, "%-10s %14s %14s %14s %14s\n", "kind", "mu", "psi", "omega", "tau");
  out << line;
  for (const auto& s : report.summaries) {
    char mu[32];
    if (s.kind == SynapseKind::Constant)
      std::snprintf(mu, sizeof mu, "%.3f (%.3f)", s.cells[5].mean, s.cells[5].sd);
    else
      std::snprintf(mu, sizeof mu, "NA");
    std::snprintf(line, sizeof line, "%-10s %14s %7.3f (%.3f) %7.3f (%.3f) %7.3f (%.3f)\n",
                  std::string(to_string(s.kind)).c_str(), mu, s.cells[6].mean, s.cells[6].sd,
                  s.cells[7].mean, s.cells[7].sd, s.cells[8].mean, s.cells[8].sd);
    out << line;
  }
  if (report.ttests.empty()) {
    out << "\n(no t-tests: fewer than 2 repeats)\n";
    return;
  }
  out << "\nWelch t-tests, p < 0.05 marked *\n";
  for (const auto& t : report.ttests) {
    if (t.metric != "best_f" && t.metric != "avg_f" && t.metric != "gens_to_solve") continue;
    std::snprintf(line, sizeof line, "  %-14s %-9s vs %-9s p = %.4g %s\n", t.metric.c_str(),
                  std::string(to_string(t.a)).c_str(), std::string(to_string(t.b)).c_str(),
                  t.result.p, t.result.p < 0.05 ? "*" : "");
    out << line;
  }
}

void write_file_atomically(const std::filesystem::path& path, const std::string& contents) {
  auto partial = path;
  partial += ".partial";
  {
    std::ofstream f(partial, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + partial.string());
    f << contents;
    f.flush();
    if (!f) throw std::runtime_error("error writing " + partial.string());
  }
  std::error_code ec;
  std::filesystem::rename(partial, path, ec);
  if (ec) throw std::runtime_error("cannot rename " + partial.string() + ": " + ec.message());
}

void write_trajectory_csv(std::ostream& out, TaskKind task, const Genome& genome,
                          std::uint64_t seed, const TaskSetup& setup, TrialResult* result) {
  const bool tmaze = task == TaskKind::TMaze;
  out << "robot_step,x,y,heading,action,f" << (tmaze ? ",phase,run" : "") << '\n';
  TrialHooks hooks;
  hooks.on_step = [&](const TraceRow& row) {
    out << row.robot_step << ',' << format_number(row.x) << ',' << format_number(row.y) << ','
        << format_number(row.heading) << ',' << to_string(row.action) << ','
        << format_number(row.f);
    if (tmaze) out << ',' << row.phase << ',' << row.run;
    out << '\n';
  };
  const auto r = run_trial(task, genome, seed, setup, hooks);
  if (result) *result = r;
}

void write_synapse_activity_csv(std::ostream& out, TaskKind task, const Genome& genome,
                                std::uint64_t seed, const TaskSetup& setup, TrialResult* result) {
  out << "phase,run,robot_step,synapse,pre,post,w,sc,switch_count\n";
  Network net(genome, setup.neuron, setup.synapse);
  std::vector<std::string> labels_pre, labels_post;
  for (const auto& c : genome.connections) {
    labels_pre.push_back(to_string(c.site.pre));
    labels_post.push_back(to_string(c.site.post));
  }
  const Controller controller = [&](const SensorInputs& in) { return net.robot_step(in).action; };
  TrialHooks hooks;
  hooks.on_step = [&](const TraceRow& row) {
    const auto syn = net.synapses();
    for (std::size_t k = 0; k < syn.size(); ++k)
      out << row.phase << ',' << row.run << ',' << row.robot_step << ',' << k << ','
          << labels_pre[k] << ',' << labels_post[k] << ',' << format_number(syn[k].state.w) << ','
          << syn[k].state.sc << ',' << syn[k].state.switch_count << '\n';
  };
  const auto r = task == TaskKind::Phototaxis ? run_phototaxis(controller, seed, setup, hooks)
                                              : run_tmaze(controller, seed, setup, hooks);
  if (result) *result = r;
}

}  // namespace memsnn
