#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "memsnn/genome.hpp"
#include "memsnn/synapse.hpp"

namespace memsnn {

using Rng = std::mt19937_64;

enum class Objective { Maximize, Minimize };

struct EvolveParams {
  int population_size = 100;
  int initial_hidden = kInitialHiddenCount;
  double connection_probability = 0.5;
  double excitatory_probability = 0.5;
  double initial_rate_max = 0.5;
  double rate_min = 0.001;
  double rate_max = 1.0;
  double weight_perturbation = 0.1;
  // Scores for minimisation are (fitness_ceiling - f + 1).
  double fitness_ceiling = 8000.0;
  double min_score = 1.0;
  SynapseParams synapse;

  void validate() const;
};

Genome init_genome(SynapseKind kind, Rng& rng, const EvolveParams& params = {});

// rate * exp(z), clamped to [lo, hi].
double mutate_rate(double rate, double z, double lo, double hi);
MutationRates mutate_rates(const MutationRates& rates, Rng& rng, const EvolveParams& params = {});

// Rates first, then constant-weight perturbation (mu), connection toggles
// over every site (tau), then at most one node event (psi, split by omega).
Genome mutate_genome(const Genome& parent, Rng& rng, const EvolveParams& params = {});

// Structural node operators, exposed for tests.
void insert_hidden_neuron(Genome& genome, int position, Sign sign, Rng& rng,
                          const EvolveParams& params);
void remove_hidden_neuron(Genome& genome, int position);

struct Evaluation {
  double fitness = 0.0;
  bool solved = false;
};

using Evaluator = std::function<Evaluation(const Genome&, std::uint64_t seed)>;

struct Member {
  Genome genome;
  std::uint64_t birth = 0;  // smaller = older
};

struct Population {
  std::vector<Member> members;
  Objective objective = Objective::Maximize;
  int generation = 0;
  std::uint64_t next_birth = 0;
  Genome best_ever;

  const Genome& best() const;
  bool any_solved() const;
};

// True when fitness `a` is strictly better than `b` under the objective.
bool better(double a, double b, Objective objective);

double selection_score(double fitness, Objective objective, const EvolveParams& params = {});

// Fitness-proportionate draw; returns an index into pop.members.
std::size_t select_parent(const Population& pop, Rng& rng, const EvolveParams& params = {});

Population init_population(SynapseKind kind, Objective objective, const Evaluator& evaluate,
                           Rng& rng, const EvolveParams& params = {});

// Two children from two independently drawn parents, mutated and evaluated,
// replace the two worst members (oldest first on ties). If the evaluator
// throws the population is left untouched and the exception propagates.
void ga_generation(Population& pop, const Evaluator& evaluate, Rng& rng,
                   const EvolveParams& params = {});

}  // namespace memsnn
