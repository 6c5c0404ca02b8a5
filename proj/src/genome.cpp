#include "memsnn/genome.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace memsnn {

using ordered_json = nlohmann::ordered_json;

std::string to_string(NeuronRef ref) {
  const char prefix = ref.layer == Layer::Input ? 'i' : ref.layer == Layer::Hidden ? 'h' : 'o';
  return prefix + std::to_string(ref.index);
}

NeuronRef neuron_ref_from_string(const std::string& text) {
  if (text.size() < 2) throw std::invalid_argument("bad neuron ref '" + text + "'");
  NeuronRef ref;
  switch (text[0]) {
    case 'i': ref.layer = Layer::Input; break;
    case 'h': ref.layer = Layer::Hidden; break;
    case 'o': ref.layer = Layer::Output; break;
    default: throw std::invalid_argument("bad neuron ref '" + text + "'");
  }
  std::size_t used = 0;
  ref.index = std::stoi(text.substr(1), &used);
  if (used != text.size() - 1 || ref.index < 0)
    throw std::invalid_argument("bad neuron ref '" + text + "'");
  return ref;
}

std::vector<Site> connection_sites(int hidden_count) {
  std::vector<Site> sites;
  sites.reserve(site_count(hidden_count));
  for (int i = 0; i < kInputCount; ++i)
    for (int h = 0; h < hidden_count; ++h)
      sites.push_back({{Layer::Input, i}, {Layer::Hidden, h}});
  for (int a = 0; a < hidden_count; ++a)
    for (int b = 0; b < hidden_count; ++b)
      if (a != b) sites.push_back({{Layer::Hidden, a}, {Layer::Hidden, b}});
  for (int h = 0; h < hidden_count; ++h)
    for (int o = 0; o < kOutputCount; ++o)
      sites.push_back({{Layer::Hidden, h}, {Layer::Output, o}});
  return sites;
}

std::size_t site_count(int hidden_count) {
  const auto h = static_cast<std::size_t>(hidden_count);
  return kInputCount * h + h * (h > 0 ? h - 1 : 0) + h * kOutputCount;
}

bool is_valid_site(const Site& site, int hidden_count) {
  auto in_range = [&](NeuronRef r) {
    switch (r.layer) {
      case Layer::Input: return r.index >= 0 && r.index < kInputCount;
      case Layer::Hidden: return r.index >= 0 && r.index < hidden_count;
      case Layer::Output: return r.index >= 0 && r.index < kOutputCount;
    }
    return false;
  };
  if (!in_range(site.pre) || !in_range(site.post)) return false;
  const auto pl = site.pre.layer, ql = site.post.layer;
  if (pl == Layer::Input) return ql == Layer::Hidden;
  if (pl == Layer::Hidden) {
    if (ql == Layer::Hidden) return site.pre.index != site.post.index;
    return ql == Layer::Output;
  }
  return false;
}

void sort_connections(Genome& genome) {
  std::sort(genome.connections.begin(), genome.connections.end(),
            [](const ConnectionGene& a, const ConnectionGene& b) { return a.site < b.site; });
}

void validate(const Genome& genome) {
  const int h = genome.hidden_count();
  for (std::size_t k = 0; k < genome.connections.size(); ++k) {
    const auto& c = genome.connections[k];
    if (!is_valid_site(c.site, h))
      throw std::invalid_argument("genome: invalid site " + to_string(c.site.pre) + "->" +
                                  to_string(c.site.post));
    if (!(c.weight >= 0.0 && c.weight <= 1.0))
      throw std::invalid_argument("genome: weight out of [0,1]");
    if (k > 0 && !(genome.connections[k - 1].site < c.site))
      throw std::invalid_argument("genome: connections unsorted or duplicated at " +
                                  to_string(c.site.pre) + "->" + to_string(c.site.post));
  }
  const auto& r = genome.rates;
  for (double rate : {r.mu, r.psi, r.omega, r.tau})
    if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("genome: rate out of [0,1]");
}

std::string to_json(const Genome& genome) {
  ordered_json j;
  j["kind"] = std::string(to_string(genome.kind));
  auto neurons = ordered_json::array();
  for (Sign s : genome.hidden) neurons.push_back(s == Sign::Excitatory ? "+" : "-");
  j["neurons"] = std::move(neurons);
  auto conns = ordered_json::array();
  for (const auto& c : genome.connections)
    conns.push_back(ordered_json::array({to_string(c.site.pre), to_string(c.site.post), c.weight}));
  j["connections"] = std::move(conns);
  j["rates"] = {{"mu", genome.rates.mu},
                {"psi", genome.rates.psi},
                {"omega", genome.rates.omega},
                {"tau", genome.rates.tau}};
  j["fitness"] = genome.fitness;
  j["solved"] = genome.solved;
  return j.dump(1);
}

Genome genome_from_json(const std::string& text) {
  Genome g;
  try {
    const auto j = ordered_json::parse(text);
    g.kind = synapse_kind_from_string(j.at("kind").get<std::string>());
    for (const auto& n : j.at("neurons")) {
      const auto s = n.get<std::string>();
      if (s != "+" && s != "-") throw std::invalid_argument("genome: neuron sign must be + or -");
      g.hidden.push_back(s == "+" ? Sign::Excitatory : Sign::Inhibitory);
    }
    for (const auto& c : j.at("connections")) {
      g.connections.push_back({{neuron_ref_from_string(c.at(0).get<std::string>()),
                                neuron_ref_from_string(c.at(1).get<std::string>())},
                               c.at(2).get<double>()});
    }
    const auto& r = j.at("rates");
    g.rates = {r.at("mu").get<double>(), r.at("psi").get<double>(), r.at("omega").get<double>(),
               r.at("tau").get<double>()};
    g.fitness = j.value("fitness", 0.0);
    g.solved = j.value("solved", false);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("genome: malformed record: ") + e.what());
  }
  sort_connections(g);
  validate(g);
  return g;
}

}  // namespace memsnn
