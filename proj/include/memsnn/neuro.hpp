#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "memsnn/genome.hpp"
#include "memsnn/synapse.hpp"

namespace memsnn {

struct NeuronParams {
  double a = 0.3;         // excitation constant
  double b = 0.05;        // leak
  double c = 0.0;         // reset value
  double m_theta = 0.6;   // firing threshold
  int ls_peak = 3;        // LS value set on a spike
  int processing_steps = 21;

  friend bool operator==(const NeuronParams&, const NeuronParams&) = default;
  void validate() const;
};

struct NeuronUpdate {
  double potential;
  bool spiked;
};

// m' = m + (I + a - b m); a spike (strictly above threshold) resets to c.
constexpr NeuronUpdate neuron_step(double m, double input, const NeuronParams& p) {
  const double next = m + (input + p.a - p.b * m);
  if (next > p.m_theta) return {p.c, true};
  return {next, false};
}

// Spike transit time in processing steps: |index distance| (at least 1)
// between hidden neurons, 1 for cross-layer links. Throws
// std::invalid_argument when the site does not exist for this hidden count.
int connection_delay(const Site& site, int hidden_count);

enum class Action : std::uint8_t { Forward, Left, Right };

std::string_view to_string(Action action);

// Output neuron i is "high" when it fired in more than half of the
// processing steps of a robot step.
Action decode_action(int count_left, int count_right, int processing_steps = 21);

struct SpikeInFlight {
  int target = 0;
  double value = 0.0;
  std::int64_t arrival_step = 0;

  friend bool operator==(const SpikeInFlight&, const SpikeInFlight&) = default;
};

struct NetworkSynapse {
  int pre = 0;  // flat neuron ids
  int post = 0;
  int delay = 1;
  SynapseState state;
};

// Everything that evolves during a trial; two equal snapshots behave identically.
struct NetworkSnapshot {
  std::vector<double> potentials;
  std::vector<int> last_spike;
  std::vector<SynapseState> synapses;
  std::vector<SpikeInFlight> in_flight;  // summed per (arrival_step, target)
  std::int64_t step = 0;

  friend bool operator==(const NetworkSnapshot&, const NetworkSnapshot&) = default;
};

struct ProcessingResult {
  std::array<bool, kOutputCount> output_spikes{};
};

struct RobotStepResult {
  Action action = Action::Forward;
  std::array<int, kOutputCount> output_counts{};
};

using SensorInputs = std::array<double, kInputCount>;

/// Discrete-time LIF network instantiated from a genome.
///
/// Neurons are stored flat: inputs [0, 6), hidden [6, 6 + H), outputs
/// [6 + H, 8 + H). Each processing step decays LS, delivers the spikes due
/// this step, integrates and fires, enqueues outgoing spikes, then runs the
/// coincidence detector and plasticity rule on every synapse.
class Network {
 public:
  Network(const Genome& genome, const NeuronParams& neuron_params = {},
          const SynapseParams& synapse_params = {});

  ProcessingResult process(const SensorInputs& inputs);

  // Runs processing_steps with held inputs and decodes the output spike trains.
  RobotStepResult robot_step(const SensorInputs& inputs);

  int neuron_count() const { return static_cast<int>(potential_.size()); }
  int hidden_count() const { return hidden_count_; }
  int flat_id(NeuronRef ref) const;

  double potential(int id) const { return potential_[id]; }
  int last_spike(int id) const { return last_spike_[id]; }
  double sign(int id) const { return sign_[id]; }
  bool spiked(int id) const { return spiked_[id] != 0; }
  std::int64_t step() const { return step_; }

  std::span<const NetworkSynapse> synapses() const { return synapses_; }
  // Coincidence outcome of each synapse during the most recent processing step.
  std::span<const Coincidence> last_coincidences() const { return coincidences_; }

  NetworkSnapshot snapshot() const;

 private:
  NeuronParams neuron_params_;
  SynapseParams synapse_params_;
  int hidden_count_ = 0;
  bool plastic_ = false;

  std::vector<double> potential_;
  std::vector<int> last_spike_;
  std::vector<double> sign_;
  std::vector<char> spiked_;
  std::vector<double> drive_;

  std::vector<NetworkSynapse> synapses_;
  std::vector<int> outgoing_offsets_;  // CSR over synapses_ by pre id
  std::vector<int> outgoing_;
  std::vector<Coincidence> coincidences_;

  // Ring of summed pending input per target, row = arrival_step % ring size.
  int ring_ = 1;
  std::vector<double> pending_;
  std::vector<int> pending_count_;
  std::int64_t step_ = 0;
};

}  // namespace memsnn
