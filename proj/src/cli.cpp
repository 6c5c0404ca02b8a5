#include "memsnn/cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

namespace memsnn {
namespace {

std::string task_name(TaskKind t) { return t == TaskKind::Phototaxis ? "phototaxis" : "tmaze"; }

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Flags {
  std::string task = "phototaxis";
  std::vector<std::string> synapses{"unipolar", "bipolar", "constant"};
  std::string config_file;
};

void bind_options(CLI::App& app, ParsedCommand& cmd, Flags& flags) {
  auto& c = cmd.config;
  auto& s = c.setup;
  app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
  app.allow_config_extras(false);

  app.add_option("--task", flags.task, "phototaxis | tmaze")
      ->check(CLI::IsMember({"phototaxis", "tmaze"}));
  app.add_option("--synapse", flags.synapses, "synapse kinds, comma separated")
      ->delimiter(',')
      ->check(CLI::IsMember({"unipolar", "bipolar", "constant"}));
  app.add_option("--generations", c.generations, "GA generations per repeat")
      ->check(CLI::PositiveNumber);
  app.add_option("--repeats", c.repeats, "independent repeats per kind")->check(CLI::PositiveNumber);
  app.add_option("--seed", c.seed, "base seed");
  app.add_option("--threads", c.threads, "worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out", c.out_dir, "output directory")->envname("MEMSNN_OUT");
  app.add_flag("--trace-trajectory", c.trace_trajectory, "dump best-genome trajectories");
  app.add_flag("--trace-synapses", c.trace_synapses, "dump best-genome synapse activity");
  app.add_flag("--dry-run", cmd.dry_run, "validate the configuration and exit")
      ->configurable(false);

  app.add_option("--population", c.population)->check(CLI::Range(2, 1000000));
  app.add_option("--a", s.neuron.a);
  app.add_option("--b", s.neuron.b);
  app.add_option("--c", s.neuron.c);
  app.add_option("--m-theta", s.neuron.m_theta);
  app.add_option("--ls-peak", s.neuron.ls_peak);
  app.add_option("--processing-steps", s.neuron.processing_steps);
  app.add_option("--theta-ls", s.synapse.theta_ls);
  app.add_option("--s-n", s.synapse.s_n);
  app.add_option("--delta-w", s.synapse.delta_w);
  app.add_option("--w-lrs", s.synapse.w_lrs);
  app.add_option("--w-hrs", s.synapse.w_hrs);
  app.add_option("--w-bipolar-init", s.synapse.w_bipolar_init);
  app.add_option("--v-full", s.robot.v_full);
  app.add_option("--radius", s.robot.radius);
  app.add_option("--axle", s.robot.axle);
  app.add_option("--ir-range", s.robot.ir_range);
  app.add_option("--light-half-distance", s.robot.light_half_distance);
  app.add_option("--ir-noise", s.robot.ir_noise);
  app.add_option("--light-noise", s.robot.light_noise);
  app.add_option("--bump-reverse", s.robot.bump_reverse);
  app.add_option("--bump-penalty", s.robot.bump_penalty);
  app.add_option("--max-steps", s.trial.max_steps);
  app.add_option("--phase-steps", s.trial.phase_steps);
  app.add_option("--retests", s.trial.retests);
  app.add_option("--goal-bonus", s.trial.goal_bonus);
}

// Re-raises validation failures as usage errors naming the offending key.
void validate_run_config(const RunConfig& c) {
  auto check = [](auto&& fn) {
    try {
      fn();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  };
  check([&] { c.setup.neuron.validate(); });
  check([&] { c.setup.synapse.validate(); });
  check([&] { c.setup.robot.validate(); });
  if (c.setup.trial.phase_steps * 2 != c.setup.trial.max_steps)
    throw UsageError("phase-steps: must be half of max-steps");
  check([&] { c.setup.trial.validate(); });
  check([&] { c.experiment().validate(); });
}

}  // namespace

ExperimentConfig RunConfig::experiment() const {
  ExperimentConfig e;
  e.task = task;
  e.kinds = kinds;
  e.repeats = repeats;
  e.generations = generations;
  e.base_seed = seed;
  e.threads = threads;
  e.setup = setup;
  e.evolve.population_size = population;
  e.evolve.synapse = setup.synapse;
  e.evolve.fitness_ceiling = setup.trial.max_steps;
  return e;
}

ParsedCommand parse_config(const std::vector<std::string>& args) {
  ParsedCommand cmd;
  Flags flags;
  CLI::App app{"Evolve memristive spiking controllers for robot navigation tasks", "memsnn"};
  app.require_subcommand(1);
  bind_options(app, cmd, flags);

  auto* run = app.add_subcommand("run", "run an evolutionary experiment")->fallthrough();
  auto* replay = app.add_subcommand("replay", "re-run one genome and dump its trajectory")->fallthrough();
  auto* trace = app.add_subcommand("trace", "re-run one genome and dump synapse activity")->fallthrough();
  replay->add_option("genome", cmd.genome_file, "genome JSON file")->required()->check(CLI::ExistingFile);
  trace->add_option("genome", cmd.genome_file, "genome JSON file")->required()->check(CLI::ExistingFile);

  std::vector<const char*> argv{"memsnn"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  cmd.command = run->parsed() ? Command::Run : replay->parsed() ? Command::Replay : Command::Trace;
  auto& c = cmd.config;
  c.task = flags.task == "tmaze" ? TaskKind::TMaze : TaskKind::Phototaxis;
  c.kinds.clear();
  for (const auto& k : flags.synapses) {
    const auto kind = synapse_kind_from_string(k);
    if (std::find(c.kinds.begin(), c.kinds.end(), kind) != c.kinds.end())
      throw UsageError("--synapse: '" + k + "' given twice");
    c.kinds.push_back(kind);
  }
  if (app.count("--generations") == 0) c.generations = c.task == TaskKind::TMaze ? 500 : 1000;
  validate_run_config(c);
  return cmd;
}

std::string config_to_text(const RunConfig& c) {
  std::ostringstream o;
  const auto& s = c.setup;
  o << "task=" << task_name(c.task) << '\n';
  o << "synapse=";
  for (std::size_t i = 0; i < c.kinds.size(); ++i) o << (i ? "," : "") << to_string(c.kinds[i]);
  o << '\n';
  o << "generations=" << c.generations << '\n'
    << "repeats=" << c.repeats << '\n'
    << "seed=" << c.seed << '\n'
    << "threads=" << c.threads << '\n'
    << "out=\"" << c.out_dir.string() << "\"\n"
    << "trace-trajectory=" << (c.trace_trajectory ? "true" : "false") << '\n'
    << "trace-synapses=" << (c.trace_synapses ? "true" : "false") << '\n'
    << "population=" << c.population << '\n'
    << "a=" << exact(s.neuron.a) << '\n'
    << "b=" << exact(s.neuron.b) << '\n'
    << "c=" << exact(s.neuron.c) << '\n'
    << "m-theta=" << exact(s.neuron.m_theta) << '\n'
    << "ls-peak=" << s.neuron.ls_peak << '\n'
    << "processing-steps=" << s.neuron.processing_steps << '\n'
    << "theta-ls=" << s.synapse.theta_ls << '\n'
    << "s-n=" << s.synapse.s_n << '\n'
    << "delta-w=" << exact(s.synapse.delta_w) << '\n'
    << "w-lrs=" << exact(s.synapse.w_lrs) << '\n'
    << "w-hrs=" << exact(s.synapse.w_hrs) << '\n'
    << "w-bipolar-init=" << exact(s.synapse.w_bipolar_init) << '\n'
    << "v-full=" << exact(s.robot.v_full) << '\n'
    << "radius=" << exact(s.robot.radius) << '\n'
    << "axle=" << exact(s.robot.axle) << '\n'
    << "ir-range=" << exact(s.robot.ir_range) << '\n'
    << "light-half-distance=" << exact(s.robot.light_half_distance) << '\n'
    << "ir-noise=" << exact(s.robot.ir_noise) << '\n'
    << "light-noise=" << exact(s.robot.light_noise) << '\n'
    << "bump-reverse=" << exact(s.robot.bump_reverse) << '\n'
    << "bump-penalty=" << s.robot.bump_penalty << '\n'
    << "max-steps=" << s.trial.max_steps << '\n'
    << "phase-steps=" << s.trial.phase_steps << '\n'
    << "retests=" << s.trial.retests << '\n'
    << "goal-bonus=" << exact(s.trial.goal_bonus) << '\n';
  return o.str();
}

namespace {

int run_experiment_command(const ParsedCommand& cmd, std::ostream& out) {
  const auto& c = cmd.config;
  namespace fs = std::filesystem;
  fs::create_directories(c.out_dir);
  write_file_atomically(c.out_dir / "config.ini", config_to_text(c));

  const auto report = run_experiment(c.experiment());

  std::ostringstream gens, summary, ttests;
  write_generations_csv(gens, report);
  write_summary_csv(summary, report);
  write_ttests_csv(ttests, report);
  write_file_atomically(c.out_dir / "generations.csv", gens.str());
  write_file_atomically(c.out_dir / "summary.csv", summary.str());
  write_file_atomically(c.out_dir / "ttests.csv", ttests.str());

  for (std::size_t k = 0; k < report.runs.size(); ++k) {
    const auto kind = std::string(to_string(c.kinds[k]));
    std::size_t best_repeat = 0;
    for (std::size_t r = 0; r < report.runs[k].size(); ++r) {
      write_file_atomically(c.out_dir / ("best_" + kind + "_r" + std::to_string(r) + ".json"),
                            to_json(report.runs[k][r].best) + "\n");
      if (better(report.runs[k][r].best.fitness, report.runs[k][best_repeat].best.fitness,
                 objective_for(c.task)))
        best_repeat = r;
    }
    const auto& champion = report.runs[k][best_repeat].best;
    if (c.trace_trajectory) {
      std::ostringstream t;
      write_trajectory_csv(t, c.task, champion, c.seed, c.setup);
      write_file_atomically(c.out_dir / ("trajectory_" + kind + ".csv"), t.str());
    }
    if (c.trace_synapses) {
      std::ostringstream t;
      write_synapse_activity_csv(t, c.task, champion, c.seed, c.setup);
      write_file_atomically(c.out_dir / ("synapses_" + kind + ".csv"), t.str());
    }
  }
  print_summary(out, report);
  out << "\nwrote " << c.out_dir.string() << '\n';
  return 0;
}

Genome read_genome(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  std::stringstream buf;
  buf << f.rdbuf();
  return genome_from_json(buf.str());
}

int run_genome_command(const ParsedCommand& cmd, std::ostream& out) {
  const auto& c = cmd.config;
  const Genome genome = read_genome(cmd.genome_file);
  std::filesystem::create_directories(c.out_dir);
  std::ostringstream csv;
  TrialResult result;
  std::string name;
  if (cmd.command == Command::Replay) {
    write_trajectory_csv(csv, c.task, genome, c.seed, c.setup, &result);
    name = "trajectory.csv";
  } else {
    write_synapse_activity_csv(csv, c.task, genome, c.seed, c.setup, &result);
    name = "synapse_activity.csv";
  }
  write_file_atomically(c.out_dir / name, csv.str());
  out << task_name(c.task) << " " << to_string(genome.kind) << " genome: fitness "
      << format_number(result.fitness) << ", steps " << result.steps << ", "
      << (result.solved ? "solved" : "not solved") << "\nwrote " << (c.out_dir / name).string()
      << '\n';
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ParsedCommand cmd;
  try {
    cmd = parse_config(args);
  } catch (const HelpRequested& e) {
    out << e.what();
    return 0;
  } catch (const UsageError& e) {
    err << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  if (cmd.dry_run) {
    out << config_to_text(cmd.config);
    return 0;
  }
  try {
    return cmd.command == Command::Run ? run_experiment_command(cmd, out)
                                       : run_genome_command(cmd, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace memsnn
