#include "memsnn/neuro.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace memsnn {

void NeuronParams::validate() const {
  if (!(a > 0 && b > 0 && m_theta > 0 && c >= 0))
    throw std::invalid_argument("neuron: a, b, m_theta must be > 0 and c >= 0");
  if (!(m_theta > c)) throw std::invalid_argument("neuron: m_theta must exceed c");
  if (ls_peak < 1) throw std::invalid_argument("neuron: ls_peak must be >= 1");
  if (processing_steps < 1) throw std::invalid_argument("neuron: processing_steps must be >= 1");
}

int connection_delay(const Site& site, int hidden_count) {
  if (!is_valid_site(site, hidden_count))
    throw std::invalid_argument("connection_delay: no site " + to_string(site.pre) + "->" +
                                to_string(site.post));
  if (site.pre.layer == Layer::Hidden && site.post.layer == Layer::Hidden)
    return std::max(1, std::abs(site.pre.index - site.post.index));
  return 1;
}

std::string_view to_string(Action action) {
  switch (action) {
    case Action::Forward: return "forward";
    case Action::Left: return "left";
    case Action::Right: return "right";
  }
  return "unknown";
}

Action decode_action(int count_left, int count_right, int processing_steps) {
  const bool left_high = 2 * count_left > processing_steps;
  const bool right_high = 2 * count_right > processing_steps;
  if (left_high && !right_high) return Action::Left;
  if (!left_high && right_high) return Action::Right;
  return Action::Forward;
}

Network::Network(const Genome& genome, const NeuronParams& neuron_params,
                 const SynapseParams& synapse_params)
    : neuron_params_(neuron_params),
      synapse_params_(synapse_params),
      hidden_count_(genome.hidden_count()),
      plastic_(genome.kind != SynapseKind::Constant) {
  validate(genome);
  const int n = kInputCount + hidden_count_ + kOutputCount;
  potential_.assign(n, 0.0);
  last_spike_.assign(n, 0);
  sign_.assign(n, 1.0);
  spiked_.assign(n, 0);
  drive_.assign(n, 0.0);
  for (int h = 0; h < hidden_count_; ++h) sign_[kInputCount + h] = sign_value(genome.hidden[h]);

  int max_delay = 1;
  synapses_.reserve(genome.connections.size());
  for (const auto& gene : genome.connections) {
    NetworkSynapse s;
    s.pre = flat_id(gene.site.pre);
    s.post = flat_id(gene.site.post);
    s.delay = connection_delay(gene.site, hidden_count_);
    s.state = make_synapse_state(genome.kind, gene.weight, synapse_params_);
    max_delay = std::max(max_delay, s.delay);
    synapses_.push_back(s);
  }
  coincidences_.assign(synapses_.size(), Coincidence::None);

  outgoing_offsets_.assign(n + 1, 0);
  for (const auto& s : synapses_) ++outgoing_offsets_[s.pre + 1];
  for (int i = 0; i < n; ++i) outgoing_offsets_[i + 1] += outgoing_offsets_[i];
  outgoing_.resize(synapses_.size());
  auto cursor = outgoing_offsets_;
  for (int k = 0; k < static_cast<int>(synapses_.size()); ++k)
    outgoing_[cursor[synapses_[k].pre]++] = k;

  ring_ = max_delay + 1;
  pending_.assign(static_cast<std::size_t>(ring_) * n, 0.0);
  pending_count_.assign(static_cast<std::size_t>(ring_) * n, 0);
}

int Network::flat_id(NeuronRef ref) const {
  switch (ref.layer) {
    case Layer::Input: return ref.index;
    case Layer::Hidden: return kInputCount + ref.index;
    case Layer::Output: return kInputCount + hidden_count_ + ref.index;
  }
  return -1;
}

namespace {

template <class Update>
void run_plasticity(std::vector<NetworkSynapse>& synapses, std::vector<Coincidence>& outcomes,
                    const std::vector<int>& last_spike, int theta, Update update) {
  for (std::size_t k = 0; k < synapses.size(); ++k) {
    auto& s = synapses[k];
    const auto c = detect_coincidence(last_spike[s.pre], last_spike[s.post], theta);
    outcomes[k] = c;
    update(s.state, c);
  }
}

}  // namespace

ProcessingResult Network::process(const SensorInputs& inputs) {
  const int n = neuron_count();
  const std::size_t row = static_cast<std::size_t>(step_ % ring_) * n;
  double* due = pending_.data() + row;
  int* due_count = pending_count_.data() + row;

  for (int i = 0; i < n; ++i) {
    last_spike_[i] = std::max(0, last_spike_[i] - 1);
    const double drive = (i < kInputCount ? inputs[i] : 0.0) + due[i];
    due[i] = 0.0;
    due_count[i] = 0;
    const auto u = neuron_step(potential_[i], drive, neuron_params_);
    potential_[i] = u.potential;
    spiked_[i] = u.spiked;
  }

  for (int i = 0; i < n; ++i) {
    if (!spiked_[i]) continue;
    last_spike_[i] = neuron_params_.ls_peak;
    for (int k = outgoing_offsets_[i]; k < outgoing_offsets_[i + 1]; ++k) {
      const auto& s = synapses_[outgoing_[k]];
      const std::size_t at = static_cast<std::size_t>((step_ + s.delay) % ring_) * n + s.post;
      pending_[at] += s.state.w * sign_[i];
      ++pending_count_[at];
    }
  }

  const int theta = synapse_params_.theta_ls;
  const auto& sp = synapse_params_;
  if (!plastic_) {
    run_plasticity(synapses_, coincidences_, last_spike_, theta, [](SynapseState&, Coincidence) {});
  } else if (synapses_.empty() || synapses_.front().state.kind == SynapseKind::Unipolar) {
    run_plasticity(synapses_, coincidences_, last_spike_, theta,
                   [&sp](SynapseState& st, Coincidence c) {
                     if (c == Coincidence::None) {
                       if (st.sc > 0) --st.sc;
                     } else if (st.sc + 1 >= sp.s_n) {
                       st = unipolar_update(st, c, sp);
                     } else {
                       ++st.sc;
                     }
                   });
  } else {
    run_plasticity(synapses_, coincidences_, last_spike_, theta,
                   [&sp](SynapseState& st, Coincidence c) {
                     if (c == Coincidence::PreFirst || c == Coincidence::PostFirst)
                       st = bipolar_update(st, c, sp);
                   });
  }

  ++step_;
  ProcessingResult result;
  const int first_output = kInputCount + hidden_count_;
  for (int o = 0; o < kOutputCount; ++o) result.output_spikes[o] = spiked_[first_output + o];
  return result;
}

RobotStepResult Network::robot_step(const SensorInputs& inputs) {
  RobotStepResult r;
  for (int t = 0; t < neuron_params_.processing_steps; ++t) {
    const auto p = process(inputs);
    for (int o = 0; o < kOutputCount; ++o) r.output_counts[o] += p.output_spikes[o];
  }
  r.action = decode_action(r.output_counts[0], r.output_counts[1], neuron_params_.processing_steps);
  return r;
}

NetworkSnapshot Network::snapshot() const {
  NetworkSnapshot s;
  s.potentials = potential_;
  s.last_spike = last_spike_;
  s.synapses.reserve(synapses_.size());
  for (const auto& syn : synapses_) s.synapses.push_back(syn.state);
  const int n = neuron_count();
  for (int ahead = 0; ahead < ring_; ++ahead) {
    const std::int64_t arrival = step_ + ahead;
    const std::size_t row = static_cast<std::size_t>(arrival % ring_) * n;
    for (int i = 0; i < n; ++i)
      if (pending_count_[row + i] > 0) s.in_flight.push_back({i, pending_[row + i], arrival});
  }
  s.step = step_;
  return s;
}

}  // namespace memsnn
