#include "memsnn/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace memsnn {
namespace {

double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

bool chance(Rng& rng, double p) { return uniform(rng) < p; }

double new_connection_weight(SynapseKind kind, Rng& rng, const EvolveParams& params) {
  if (kind == SynapseKind::Constant) return uniform(rng);
  return initial_memristor_weight(kind, params.synapse);
}

Sign random_sign(Rng& rng, const EvolveParams& params) {
  return chance(rng, params.excitatory_probability) ? Sign::Excitatory : Sign::Inhibitory;
}

}  // namespace

void EvolveParams::validate() const {
  if (population_size < 2) throw std::invalid_argument("evolve: population_size must be >= 2");
  if (initial_hidden < 0) throw std::invalid_argument("evolve: initial_hidden must be >= 0");
  if (!(rate_min > 0 && rate_min <= rate_max && rate_max <= 1.0))
    throw std::invalid_argument("evolve: need 0 < rate_min <= rate_max <= 1");
  if (!(min_score > 0)) throw std::invalid_argument("evolve: min_score must be > 0");
  synapse.validate();
}

Genome init_genome(SynapseKind kind, Rng& rng, const EvolveParams& params) {
  Genome g;
  g.kind = kind;
  for (int h = 0; h < params.initial_hidden; ++h) g.hidden.push_back(random_sign(rng, params));
  for (const auto& site : connection_sites(params.initial_hidden))
    if (chance(rng, params.connection_probability))
      g.connections.push_back({site, new_connection_weight(kind, rng, params)});
  auto seed_rate = [&] {
    return std::clamp(uniform(rng, 0.0, params.initial_rate_max), params.rate_min, params.rate_max);
  };
  g.rates.mu = seed_rate();
  g.rates.psi = seed_rate();
  g.rates.omega = seed_rate();
  g.rates.tau = seed_rate();
  return g;
}

double mutate_rate(double rate, double z, double lo, double hi) {
  return std::clamp(rate * std::exp(z), lo, hi);
}

MutationRates mutate_rates(const MutationRates& rates, Rng& rng, const EvolveParams& params) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MutationRates r;
  r.mu = mutate_rate(rates.mu, normal(rng), params.rate_min, params.rate_max);
  r.psi = mutate_rate(rates.psi, normal(rng), params.rate_min, params.rate_max);
  r.omega = mutate_rate(rates.omega, normal(rng), params.rate_min, params.rate_max);
  r.tau = mutate_rate(rates.tau, normal(rng), params.rate_min, params.rate_max);
  return r;
}

void insert_hidden_neuron(Genome& genome, int position, Sign sign, Rng& rng,
                          const EvolveParams& params) {
  if (position < 0 || position > genome.hidden_count())
    throw std::out_of_range("insert_hidden_neuron: position out of range");
  for (auto& c : genome.connections)
    for (NeuronRef* r : {&c.site.pre, &c.site.post})
      if (r->layer == Layer::Hidden && r->index >= position) ++r->index;
  genome.hidden.insert(genome.hidden.begin() + position, sign);

  const NeuronRef fresh{Layer::Hidden, position};
  std::vector<Site> sites;
  for (int i = 0; i < kInputCount; ++i) sites.push_back({{Layer::Input, i}, fresh});
  for (int h = 0; h < genome.hidden_count(); ++h) {
    if (h == position) continue;
    sites.push_back({fresh, {Layer::Hidden, h}});
    sites.push_back({{Layer::Hidden, h}, fresh});
  }
  for (int o = 0; o < kOutputCount; ++o) sites.push_back({fresh, {Layer::Output, o}});
  for (const auto& site : sites)
    if (chance(rng, params.connection_probability))
      genome.connections.push_back({site, new_connection_weight(genome.kind, rng, params)});
  sort_connections(genome);
}

void remove_hidden_neuron(Genome& genome, int position) {
  if (position < 0 || position >= genome.hidden_count())
    throw std::out_of_range("remove_hidden_neuron: position out of range");
  auto touches = [position](const ConnectionGene& c) {
    return (c.site.pre.layer == Layer::Hidden && c.site.pre.index == position) ||
           (c.site.post.layer == Layer::Hidden && c.site.post.index == position);
  };
  std::erase_if(genome.connections, touches);
  for (auto& c : genome.connections)
    for (NeuronRef* r : {&c.site.pre, &c.site.post})
      if (r->layer == Layer::Hidden && r->index > position) --r->index;
  genome.hidden.erase(genome.hidden.begin() + position);
}

Genome mutate_genome(const Genome& parent, Rng& rng, const EvolveParams& params) {
  Genome child = parent;
  child.rates = mutate_rates(parent.rates, rng, params);

  if (child.kind == SynapseKind::Constant) {
    for (auto& c : child.connections)
      if (chance(rng, child.rates.mu))
        c.weight = std::clamp(
            c.weight + uniform(rng, -params.weight_perturbation, params.weight_perturbation), 0.0,
            1.0);
  }

  std::vector<ConnectionGene> toggled;
  toggled.reserve(child.connections.size());
  auto existing = child.connections.begin();
  for (const auto& site : connection_sites(child.hidden_count())) {
    const bool present = existing != child.connections.end() && existing->site == site;
    const bool flip = chance(rng, child.rates.tau);
    if (present) {
      if (!flip) toggled.push_back(*existing);
      ++existing;
    } else if (flip) {
      toggled.push_back({site, new_connection_weight(child.kind, rng, params)});
    }
  }
  child.connections = std::move(toggled);

  if (chance(rng, child.rates.psi)) {
    if (chance(rng, child.rates.omega)) {
      const int pos = std::uniform_int_distribution<int>(0, child.hidden_count())(rng);
      insert_hidden_neuron(child, pos, random_sign(rng, params), rng, params);
    } else if (child.hidden_count() > 0) {
      remove_hidden_neuron(child, std::uniform_int_distribution<int>(0, child.hidden_count() - 1)(rng));
    }
  }
  child.fitness = 0.0;
  child.solved = false;
  return child;
}

bool better(double a, double b, Objective objective) {
  return objective == Objective::Maximize ? a > b : a < b;
}

const Genome& Population::best() const {
  if (members.empty()) throw std::logic_error("population is empty");
  const auto it = std::min_element(members.begin(), members.end(), [&](const Member& a, const Member& b) {
    return better(a.genome.fitness, b.genome.fitness, objective);
  });
  return it->genome;
}

bool Population::any_solved() const {
  return std::any_of(members.begin(), members.end(), [](const Member& m) { return m.genome.solved; });
}

double selection_score(double fitness, Objective objective, const EvolveParams& params) {
  const double raw =
      objective == Objective::Maximize ? fitness : params.fitness_ceiling - fitness + 1.0;
  return std::max(raw, params.min_score);
}

std::size_t select_parent(const Population& pop, Rng& rng, const EvolveParams& params) {
  if (pop.members.empty()) throw std::logic_error("select_parent: empty population");
  std::vector<double> cumulative(pop.members.size());
  double total = 0.0;
  for (std::size_t i = 0; i < pop.members.size(); ++i) {
    total += selection_score(pop.members[i].genome.fitness, pop.objective, params);
    cumulative[i] = total;
  }
  if (!(total > 0.0))
    return std::uniform_int_distribution<std::size_t>(0, pop.members.size() - 1)(rng);
  const double x = uniform(rng, 0.0, total);
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
  return std::min<std::size_t>(it - cumulative.begin(), pop.members.size() - 1);
}

Population init_population(SynapseKind kind, Objective objective, const Evaluator& evaluate,
                           Rng& rng, const EvolveParams& params) {
  params.validate();
  Population pop;
  pop.objective = objective;
  pop.members.reserve(params.population_size + 2);
  for (int i = 0; i < params.population_size; ++i) {
    Member m{init_genome(kind, rng, params), pop.next_birth++};
    const auto e = evaluate(m.genome, rng());
    m.genome.fitness = e.fitness;
    m.genome.solved = e.solved;
    pop.members.push_back(std::move(m));
  }
  pop.best_ever = pop.best();
  return pop;
}

void ga_generation(Population& pop, const Evaluator& evaluate, Rng& rng,
                   const EvolveParams& params) {
  std::array<Member, 2> children;
  for (auto& child : children) {
    const auto& parent = pop.members[select_parent(pop, rng, params)].genome;
    child.genome = mutate_genome(parent, rng, params);
  }
  for (auto& child : children) {
    const auto e = evaluate(child.genome, rng());
    child.genome.fitness = e.fitness;
    child.genome.solved = e.solved;
  }

  for (auto& child : children) {
    child.birth = pop.next_birth++;
    pop.members.push_back(std::move(child));
  }
  for (int k = 0; k < 2; ++k) {
    const auto worst = std::min_element(pop.members.begin(), pop.members.end(),
                                        [&](const Member& a, const Member& b) {
                                          if (a.genome.fitness != b.genome.fitness)
                                            return better(b.genome.fitness, a.genome.fitness,
                                                          pop.objective);
                                          return a.birth < b.birth;
                                        });
    pop.members.erase(worst);
  }
  ++pop.generation;
  if (better(pop.best().fitness, pop.best_ever.fitness, pop.objective)) pop.best_ever = pop.best();
}

}  // namespace memsnn
