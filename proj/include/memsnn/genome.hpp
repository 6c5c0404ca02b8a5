#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "memsnn/synapse.hpp"

namespace memsnn {

inline constexpr int kInputCount = 6;
inline constexpr int kOutputCount = 2;
inline constexpr int kInitialHiddenCount = 9;

enum class Layer : std::uint8_t { Input, Hidden, Output };

struct NeuronRef {
  Layer layer = Layer::Input;
  int index = 0;

  friend auto operator<=>(const NeuronRef&, const NeuronRef&) = default;
};

// "i0".."i5", "h<k>", "o0".."o1"
std::string to_string(NeuronRef ref);
NeuronRef neuron_ref_from_string(const std::string& text);

enum class Sign : std::int8_t { Inhibitory = -1, Excitatory = 1 };

inline double sign_value(Sign s) { return s == Sign::Excitatory ? 1.0 : -1.0; }

struct Site {
  NeuronRef pre;
  NeuronRef post;

  friend auto operator<=>(const Site& a, const Site& b) {
    if (auto c = a.pre.layer <=> b.pre.layer; c != 0) return c;
    if (auto c = a.post.layer <=> b.post.layer; c != 0) return c;
    if (auto c = a.pre.index <=> b.pre.index; c != 0) return c;
    return a.post.index <=> b.post.index;
  }
  friend bool operator==(const Site&, const Site&) = default;
};

// Every input->hidden pair, every ordered hidden->hidden pair with pre != post,
// and every hidden->output pair, in canonical order.
std::vector<Site> connection_sites(int hidden_count);
std::size_t site_count(int hidden_count);
bool is_valid_site(const Site& site, int hidden_count);

struct ConnectionGene {
  Site site;
  double weight = 0.0;

  friend bool operator==(const ConnectionGene&, const ConnectionGene&) = default;
};

struct MutationRates {
  double mu = 0.0;     // constant-weight perturbation
  double psi = 0.0;    // node event
  double omega = 0.0;  // node addition (vs removal) given an event
  double tau = 0.0;    // connection toggle

  friend bool operator==(const MutationRates&, const MutationRates&) = default;
};

struct Genome {
  SynapseKind kind = SynapseKind::Constant;
  std::vector<Sign> hidden;
  std::vector<ConnectionGene> connections;  // canonical site order, unique sites
  MutationRates rates;
  double fitness = 0.0;
  bool solved = false;

  int hidden_count() const { return static_cast<int>(hidden.size()); }

  friend bool operator==(const Genome&, const Genome&) = default;
};

// Throws std::invalid_argument naming the first violated invariant.
void validate(const Genome& genome);

void sort_connections(Genome& genome);

std::string to_json(const Genome& genome);
Genome genome_from_json(const std::string& text);

}  // namespace memsnn
