#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "memsnn/lab.hpp"

namespace memsnn {

enum class Command { Run, Replay, Trace };

struct RunConfig {
  TaskKind task = TaskKind::Phototaxis;
  std::vector<SynapseKind> kinds{SynapseKind::Unipolar, SynapseKind::Bipolar,
                                 SynapseKind::Constant};
  int generations = 1000;  // 500 for the T-maze unless set explicitly
  int repeats = 30;
  std::uint64_t seed = 1;
  int threads = 0;
  std::filesystem::path out_dir = "memsnn-out";
  bool trace_trajectory = false;
  bool trace_synapses = false;
  int population = 100;
  TaskSetup setup;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  ExperimentConfig experiment() const;
};

struct ParsedCommand {
  Command command = Command::Run;
  RunConfig config;
  std::filesystem::path genome_file;  // replay / trace
  bool dry_run = false;
};

// Bad flags, bad values or unknown config keys. what() names the offending key.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HelpRequested : public UsageError {
 public:
  using UsageError::UsageError;
};

// args excludes the program name. Flags override config-file values, which
// override the defaults. Throws UsageError.
ParsedCommand parse_config(const std::vector<std::string>& args);

// Flat key=value text that parse_config reads back via --config.
std::string config_to_text(const RunConfig& config);

// Full command-line entry point; returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace memsnn
