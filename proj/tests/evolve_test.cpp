#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "memsnn/evolve.hpp"

using namespace memsnn;

namespace {

Population two_members(double f0, double f1, Objective objective) {
  Population pop;
  pop.objective = objective;
  Genome a, b;
  a.fitness = f0;
  b.fitness = f1;
  pop.members = {{a, 0}, {b, 1}};
  return pop;
}

double first_share(const Population& pop, int draws, std::uint64_t seed) {
  Rng rng(seed);
  int first = 0;
  for (int i = 0; i < draws; ++i) first += select_parent(pop, rng) == 0;
  return static_cast<double>(first) / draws;
}

// Dummy task: fitness rewards hidden neurons and connections, plus noise.
Evaluation dummy(const Genome& g, std::uint64_t seed) {
  Rng rng(seed);
  const double f = 10.0 * g.hidden_count() + static_cast<double>(g.connections.size()) +
                   std::uniform_real_distribution<double>(0, 5)(rng);
  return {f, f > 400};
}

void expect_memristor_weights_fixed(const Genome& g) {
  if (g.kind == SynapseKind::Constant) return;
  const double w = g.kind == SynapseKind::Unipolar ? 0.9 : 0.5;
  for (const auto& c : g.connections) ASSERT_EQ(c.weight, w);
}

void expect_rates_in_range(const MutationRates& r) {
  for (double x : {r.mu, r.psi, r.omega, r.tau}) {
    ASSERT_GE(x, 0.001);
    ASSERT_LE(x, 1.0);
  }
}

}  // namespace

TEST(InitGenome, Statistics) {
  Rng rng(2024);
  double enabled = 0, sites = 0, excit = 0, hidden = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto g = init_genome(SynapseKind::Constant, rng);
    ASSERT_NO_THROW(validate(g));
    ASSERT_EQ(g.hidden_count(), 9);
    enabled += g.connections.size();
    sites += site_count(9);
    excit += std::count(g.hidden.begin(), g.hidden.end(), Sign::Excitatory);
    hidden += g.hidden_count();
    for (const auto& c : g.connections) {
      ASSERT_GE(c.weight, 0.0);
      ASSERT_LE(c.weight, 1.0);
    }
    expect_rates_in_range(g.rates);
    for (double x : {g.rates.mu, g.rates.psi, g.rates.omega, g.rates.tau}) ASSERT_LE(x, 0.5);
  }
  EXPECT_NEAR(enabled / sites, 0.5, 0.02);
  EXPECT_NEAR(excit / hidden, 0.5, 0.05);
}

TEST(InitGenome, MemristorWeights) {
  Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    const auto u = init_genome(SynapseKind::Unipolar, rng);
    ASSERT_FALSE(u.connections.empty());
    expect_memristor_weights_fixed(u);
    expect_memristor_weights_fixed(init_genome(SynapseKind::Bipolar, rng));
  }
}

TEST(MutateRate, Examples) {
  EXPECT_DOUBLE_EQ(mutate_rate(0.1, 0.0, 0.001, 1.0), 0.1);
  EXPECT_NEAR(mutate_rate(0.1, 1.0, 0.001, 1.0), 0.2718, 1e-4);
  EXPECT_EQ(mutate_rate(0.9, 2.0, 0.001, 1.0), 1.0);
  EXPECT_EQ(mutate_rate(0.002, -5.0, 0.001, 1.0), 0.001);
}

TEST(MutateRate, LogRateWalkIsUnbiased) {
  // Rate chosen so the clamp is essentially never hit.
  Rng rng(99);
  const MutationRates start{0.03, 0.03, 0.03, 0.03};
  EvolveParams wide;
  wide.rate_min = 1e-9;
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto r = mutate_rates(start, rng, wide);
    sum += std::log(r.mu / start.mu) + std::log(r.tau / start.tau);
  }
  EXPECT_NEAR(sum / (2 * n), 0.0, 0.03);
}

TEST(MutateGenome, ZeroRatesOnlyTouchRates) {
  Rng rng(3);
  auto g = init_genome(SynapseKind::Constant, rng);
  g.rates = {0.0, 0.0, 0.0, 0.0};
  EvolveParams p;
  p.rate_min = 0.0;
  p.rate_max = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto child = mutate_genome(g, rng, p);
    EXPECT_EQ(child.connections, g.connections);
    EXPECT_EQ(child.hidden, g.hidden);
  }
}

TEST(MutateGenome, EveryWeightMovesWhenMuIsOne) {
  Rng rng(13);
  auto g = init_genome(SynapseKind::Constant, rng);
  g.rates = {1.0, 0.0, 0.0, 0.0};
  EvolveParams p;
  p.rate_min = 0.0;
  p.rate_max = 1.0;
  int moved = 0, total = 0;
  for (int i = 0; i < 100; ++i) {
    const auto child = mutate_genome(g, rng, p);
    ASSERT_EQ(child.connections.size(), g.connections.size());
    for (std::size_t k = 0; k < g.connections.size(); ++k) {
      const double d = child.connections[k].weight - g.connections[k].weight;
      ASSERT_LE(std::abs(d), 0.1 + 1e-12);
      moved += d != 0.0;
      ++total;
    }
  }
  EXPECT_GT(moved, total / 3);
}

TEST(MutateGenome, StructureStaysValid) {
  Rng rng(77);
  for (auto kind : {SynapseKind::Unipolar, SynapseKind::Bipolar, SynapseKind::Constant}) {
    auto g = init_genome(kind, rng);
    for (int i = 0; i < 500; ++i) {
      g.rates = {0.5, 0.8, 0.5, 0.05};
      g = mutate_genome(g, rng);
      ASSERT_NO_THROW(validate(g));
      expect_memristor_weights_fixed(g);
      expect_rates_in_range(g.rates);
      ASSERT_EQ(g.fitness, 0.0);
    }
  }
}

TEST(NodeOperators, InsertRenumbersAndRemoveRestores) {
  Rng rng(4);
  auto g = init_genome(SynapseKind::Constant, rng);
  const auto before = g;
  EvolveParams p;
  insert_hidden_neuron(g, 3, Sign::Inhibitory, rng, p);
  EXPECT_EQ(g.hidden_count(), 10);
  EXPECT_EQ(g.hidden[3], Sign::Inhibitory);
  ASSERT_NO_THROW(validate(g));
  remove_hidden_neuron(g, 3);
  EXPECT_EQ(g.hidden, before.hidden);
  EXPECT_EQ(g.connections, before.connections);
  EXPECT_THROW(remove_hidden_neuron(g, 9), std::out_of_range);
  EXPECT_THROW(insert_hidden_neuron(g, 11, Sign::Excitatory, rng, p), std::out_of_range);
}

TEST(NodeOperators, RemovalDropsIncidentConnections) {
  Genome g;
  g.hidden = {Sign::Excitatory, Sign::Excitatory, Sign::Excitatory};
  g.connections = {{{{Layer::Input, 0}, {Layer::Hidden, 1}}, 0.5},
                   {{{Layer::Hidden, 0}, {Layer::Hidden, 2}}, 0.5},
                   {{{Layer::Hidden, 2}, {Layer::Hidden, 1}}, 0.5},
                   {{{Layer::Hidden, 2}, {Layer::Output, 1}}, 0.5}};
  sort_connections(g);
  remove_hidden_neuron(g, 1);
  ASSERT_EQ(g.connections.size(), 2u);
  EXPECT_EQ(g.connections[0].site.post, (NeuronRef{Layer::Hidden, 1}));
  EXPECT_EQ(g.connections[1].site.pre, (NeuronRef{Layer::Hidden, 1}));
  EXPECT_NO_THROW(validate(g));
}

TEST(Selection, Scores) {
  EXPECT_EQ(selection_score(3000, Objective::Maximize), 3000);
  EXPECT_EQ(selection_score(8000, Objective::Minimize), 1);
  EXPECT_EQ(selection_score(4000, Objective::Minimize), 4001);
  EXPECT_EQ(selection_score(0, Objective::Maximize), 1);
}

TEST(Selection, ProportionalMaximize) {
  const auto pop = two_members(3000, 1000, Objective::Maximize);
  EXPECT_NEAR(first_share(pop, 200000, 1), 0.75, 0.005);
}

TEST(Selection, ProportionalMinimize) {
  const auto pop = two_members(8000, 4000, Objective::Minimize);
  EXPECT_NEAR(1.0 - first_share(pop, 200000, 2), 4001.0 / 4002.0, 0.0005);
}

TEST(Selection, SingleMember) {
  Population pop;
  pop.members.push_back({Genome{}, 0});
  Rng rng(1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(select_parent(pop, rng), 0u);
}

TEST(Generation, SizeAndElitism) {
  Rng rng(5);
  auto pop = init_population(SynapseKind::Constant, Objective::Maximize, dummy, rng);
  ASSERT_EQ(pop.members.size(), 100u);
  double best = pop.best().fitness;
  for (int i = 0; i < 300; ++i) {
    ga_generation(pop, dummy, rng);
    ASSERT_EQ(pop.members.size(), 100u);
    ASSERT_GE(pop.best().fitness, best);
    best = pop.best().fitness;
    ASSERT_EQ(pop.best_ever.fitness, best);
  }
  EXPECT_EQ(pop.generation, 300);
}

TEST(Generation, IdenticalGenomes) {
  Rng rng(6);
  Population pop;
  pop.objective = Objective::Maximize;
  const auto g = init_genome(SynapseKind::Unipolar, rng);
  for (int i = 0; i < 100; ++i) pop.members.push_back({g, pop.next_birth++});
  pop.best_ever = g;
  ga_generation(pop, dummy, rng);
  EXPECT_EQ(pop.members.size(), 100u);
}

TEST(Generation, WorseChildrenAreDiscarded) {
  Rng rng(7);
  auto pop = init_population(SynapseKind::Bipolar, Objective::Maximize, dummy, rng);
  std::multiset<double> before;
  for (const auto& m : pop.members) before.insert(m.genome.fitness);
  const Evaluator awful = [](const Genome&, std::uint64_t) { return Evaluation{-1.0, false}; };
  ga_generation(pop, awful, rng);
  std::multiset<double> after;
  for (const auto& m : pop.members) after.insert(m.genome.fitness);
  EXPECT_EQ(before, after);
}

TEST(Generation, TiesRemoveOldestFirst) {
  Rng rng(8);
  Population pop;
  pop.objective = Objective::Minimize;
  for (int i = 0; i < 10; ++i) {
    Genome g = init_genome(SynapseKind::Constant, rng);
    g.fitness = 8000;
    pop.members.push_back({g, pop.next_birth++});
  }
  pop.best_ever = pop.members[0].genome;
  const Evaluator fail = [](const Genome&, std::uint64_t) { return Evaluation{8000.0, false}; };
  ga_generation(pop, fail, rng);
  std::vector<std::uint64_t> births;
  for (const auto& m : pop.members) births.push_back(m.birth);
  std::sort(births.begin(), births.end());
  EXPECT_EQ(births.front(), 2u);
  EXPECT_EQ(births.back(), 11u);
}

TEST(Generation, MinimizeKeepsLowest) {
  Rng rng(9);
  const Evaluator eval = [](const Genome& g, std::uint64_t seed) {
    Rng r(seed);
    return Evaluation{8000.0 - 50.0 * g.hidden_count() -
                          std::uniform_real_distribution<double>(0, 100)(r),
                      false};
  };
  auto pop = init_population(SynapseKind::Constant, Objective::Minimize, eval, rng);
  double best = pop.best().fitness;
  for (int i = 0; i < 200; ++i) {
    ga_generation(pop, eval, rng);
    ASSERT_LE(pop.best().fitness, best);
    best = pop.best().fitness;
  }
}

TEST(Generation, EvaluatorFailureLeavesPopulationUntouched) {
  Rng rng(10);
  auto pop = init_population(SynapseKind::Constant, Objective::Maximize, dummy, rng);
  const auto snapshot = pop;
  int calls = 0;
  const Evaluator flaky = [&](const Genome& g, std::uint64_t s) {
    if (++calls == 2) throw std::runtime_error("boom");
    return dummy(g, s);
  };
  EXPECT_THROW(ga_generation(pop, flaky, rng), std::runtime_error);
  EXPECT_EQ(pop.generation, snapshot.generation);
  EXPECT_EQ(pop.next_birth, snapshot.next_birth);
  ASSERT_EQ(pop.members.size(), snapshot.members.size());
  for (std::size_t i = 0; i < pop.members.size(); ++i) {
    EXPECT_EQ(pop.members[i].genome, snapshot.members[i].genome);
    EXPECT_EQ(pop.members[i].birth, snapshot.members[i].birth);
  }
}

TEST(Generation, Deterministic) {
  auto run = [] {
    Rng rng(11);
    auto pop = init_population(SynapseKind::Unipolar, Objective::Maximize, dummy, rng);
    for (int i = 0; i < 50; ++i) ga_generation(pop, dummy, rng);
    return pop.best();
  };
  EXPECT_EQ(run(), run());
}
