#include "memsnn/synapse.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace memsnn {

std::string_view to_string(SynapseKind kind) {
  switch (kind) {
    case SynapseKind::Unipolar: return "unipolar";
    case SynapseKind::Bipolar: return "bipolar";
    case SynapseKind::Constant: return "constant";
  }
  return "unknown";
}

SynapseKind synapse_kind_from_string(std::string_view name) {
  if (name == "unipolar") return SynapseKind::Unipolar;
  if (name == "bipolar") return SynapseKind::Bipolar;
  if (name == "constant") return SynapseKind::Constant;
  throw std::invalid_argument("unknown synapse kind '" + std::string(name) + "'");
}

void SynapseParams::validate() const {
  if (!(w_hrs < w_lrs)) throw std::invalid_argument("synapse: w_hrs must be < w_lrs");
  if (!(0.0 <= w_min && w_min < w_max && w_max <= 1.0))
    throw std::invalid_argument("synapse: need 0 <= w_min < w_max <= 1");
  if (s_n < 1) throw std::invalid_argument("synapse: s_n must be >= 1");
  if (theta_ls < 0) throw std::invalid_argument("synapse: theta_ls must be >= 0");
  if (!(delta_w > 0.0)) throw std::invalid_argument("synapse: delta_w must be > 0");
}

double initial_memristor_weight(SynapseKind kind, const SynapseParams& params) {
  switch (kind) {
    case SynapseKind::Unipolar: return params.w_lrs;
    case SynapseKind::Bipolar: return params.w_bipolar_init;
    case SynapseKind::Constant: break;
  }
  throw std::invalid_argument("constant synapses have no fixed initial weight");
}

SynapseState make_synapse_state(SynapseKind kind, double gene_weight,
                                const SynapseParams& params) {
  SynapseState s;
  s.kind = kind;
  switch (kind) {
    case SynapseKind::Unipolar:
      s.w = params.w_lrs;
      s.resistance = ResistanceState::Low;
      break;
    case SynapseKind::Bipolar:
      s.w = params.w_bipolar_init;
      break;
    case SynapseKind::Constant:
      s.w = std::clamp(gene_weight, params.w_min, params.w_max);
      break;
  }
  return s;
}

SynapseState unipolar_update(SynapseState state, Coincidence outcome,
                             const SynapseParams& params) {
  if (outcome == Coincidence::None) {
    state.sc = std::max(0, state.sc - 1);
    return state;
  }
  if (++state.sc >= params.s_n) {
    state.resistance = state.resistance == ResistanceState::Low ? ResistanceState::High
                                                                : ResistanceState::Low;
    state.w = state.resistance == ResistanceState::Low ? params.w_lrs : params.w_hrs;
    state.sc = 0;
    ++state.switch_count;
  }
  return state;
}

SynapseState bipolar_update(SynapseState state, Coincidence outcome,
                            const SynapseParams& params) {
  double w = state.w;
  if (outcome == Coincidence::PreFirst)
    w += params.delta_w;
  else if (outcome == Coincidence::PostFirst)
    w -= params.delta_w;
  else
    return state;

  w = std::clamp(w, params.w_min, params.w_max);
  if (w != state.w) {
    state.w = w;
    ++state.switch_count;
  }
  return state;
}

SynapseState apply_plasticity(const SynapseState& state, Coincidence outcome,
                              const SynapseParams& params) {
  switch (state.kind) {
    case SynapseKind::Unipolar: return unipolar_update(state, outcome, params);
    case SynapseKind::Bipolar: return bipolar_update(state, outcome, params);
    case SynapseKind::Constant: return constant_update(state, outcome);
  }
  return state;
}

}  // namespace memsnn
