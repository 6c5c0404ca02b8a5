#pragma once

#include <cstdint>
#include <string_view>

namespace memsnn {

enum class SynapseKind { Unipolar, Bipolar, Constant };

std::string_view to_string(SynapseKind kind);
SynapseKind synapse_kind_from_string(std::string_view name);

struct SynapseParams {
  int theta_ls = 4;           // coincidence threshold on LS_pre + LS_post
  int s_n = 4;                // unipolar sensitivity (consecutive coincidences per switch)
  double delta_w = 0.001;     // bipolar increment
  double w_lrs = 0.9;
  double w_hrs = 0.1;
  double w_bipolar_init = 0.5;
  double w_min = 0.0;
  double w_max = 1.0;

  friend bool operator==(const SynapseParams&, const SynapseParams&) = default;
  // Throws std::invalid_argument if the invariants do not hold.
  void validate() const;
};

enum class ResistanceState : std::uint8_t { Low, High };

enum class Coincidence : std::uint8_t { None, PreFirst, PostFirst, Simultaneous };

struct SynapseState {
  SynapseKind kind = SynapseKind::Constant;
  double w = 0.0;
  int sc = 0;  // consecutive-coincidence counter, unipolar only
  ResistanceState resistance = ResistanceState::Low;
  std::uint32_t switch_count = 0;

  friend bool operator==(const SynapseState&, const SynapseState&) = default;
};

// Fresh device state for a connection gene of the given kind. `gene_weight`
// is only used for constant synapses; memristors start from their fixed
// initial weight (unipolar LRS, bipolar w_bipolar_init).
SynapseState make_synapse_state(SynapseKind kind, double gene_weight,
                                const SynapseParams& params);

// Weight a newly created connection gene carries for a memristor kind.
double initial_memristor_weight(SynapseKind kind, const SynapseParams& params);

// A pre spike received one step before a post spike leaves LS_pre one below
// LS_post: that ordering is PreFirst.
constexpr Coincidence detect_coincidence(int ls_pre, int ls_post, int theta_ls) {
  if (ls_pre + ls_post <= theta_ls) return Coincidence::None;
  if (ls_pre < ls_post) return Coincidence::PreFirst;
  if (ls_post < ls_pre) return Coincidence::PostFirst;
  return Coincidence::Simultaneous;
}

/// Bistable switch. Any coincidence (either polarity) increments S_c, a quiet
/// step decrements it (floored at 0). Reaching S_n flips LRS<->HRS and
/// resets S_c.
SynapseState unipolar_update(SynapseState state, Coincidence outcome,
                             const SynapseParams& params);

/// Linear STDP device: pre-before-post potentiates by delta_w, post-before-pre
/// depresses, simultaneous spikes leave the weight alone. Clamped to
/// [w_min, w_max].
SynapseState bipolar_update(SynapseState state, Coincidence outcome,
                            const SynapseParams& params);

/// Resistor. Identity.
constexpr SynapseState constant_update(SynapseState state, Coincidence) { return state; }

SynapseState apply_plasticity(const SynapseState& state, Coincidence outcome,
                              const SynapseParams& params);

}  // namespace memsnn
