#pragma once

#include <cstdlib>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sppdcj/genome.hpp"
#include "sppdcj/io.hpp"
#include "sppdcj/pipeline.hpp"
#include "sppdcj/sim.hpp"

namespace testing {

using namespace sppdcj;

/// Parses `species ext1 ext2 [weight]` lines separated by ';' or newlines.
inline GenomeMap genomes(std::string text) {
  for (auto& c : text) {
    if (c == ';') c = '\n';
    if (c == ' ') c = '\t';
  }
  std::istringstream in(text);
  return parse_adjacencies(in, "<test>");
}

inline DegenerateGenome genome(const std::string& species, const std::string& adjacencies) {
  std::string text;
  std::istringstream in(adjacencies);
  std::string item;
  while (std::getline(in, item, ';')) {
    if (item.find_first_not_of(' ') == std::string::npos) continue;
    text += species + " " + item.substr(item.find_first_not_of(' ')) + ";";
  }
  if (text.empty()) return DegenerateGenome(species, {});
  return genomes(text).at(species);
}

inline Phylogeny edge(const std::string& a, const std::string& b) {
  return Phylogeny(std::vector<std::pair<std::string, std::string>>{{a, b}});
}

inline std::string solver_command() {
  return std::string("python3 ") + SPPDCJ_SOLVER_SCRIPT + " {lp} {sol} {time}";
}

inline bool external_solver_available() {
  static const bool ok = std::system("python3 -c 'import highspy' > /dev/null 2>&1") == 0 ||
                         std::system("python3 -c 'import pyscipopt' > /dev/null 2>&1") == 0;
  return ok;
}

inline SolverChoice internal_solver() {
  SolverChoice s;
  s.internal = true;
  return s;
}

inline SolverChoice external_solver(double time_limit = 600) {
  SolverChoice s;
  s.internal = false;
  s.command = solver_command();
  s.time_limit = time_limit;
  return s;
}

/// Random circular chromosome over markers 1..n (own family each) with
/// random orientations and order.
inline CircularChromosome random_chromosome(std::size_t n, std::mt19937_64& rng) {
  CircularChromosome c;
  for (std::size_t i = 1; i <= n; ++i) c.push_back({std::to_string(i), rng() % 2 == 0});
  std::shuffle(c.begin(), c.end(), rng);
  return c;
}

/// Random set of linear and circular chromosomes over markers 1..n.
inline DegenerateGenome random_resolved_genome(const std::string& species, std::size_t n, std::mt19937_64& rng) {
  auto order = random_chromosome(n, rng);
  std::vector<Adjacency> adj;
  std::size_t tel = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t len = 1 + rng() % (order.size() - i);
    bool circular = rng() % 2 == 0;
    auto left = [&](const OrientedMarker& m) { return m.forward ? tail_of(m.name) : head_of(m.name); };
    auto right = [&](const OrientedMarker& m) { return m.forward ? head_of(m.name) : tail_of(m.name); };
    for (std::size_t k = i; k + 1 < i + len; ++k) adj.push_back(Adjacency::make(right(order[k]), left(order[k + 1])));
    if (circular) {
      adj.push_back(Adjacency::make(right(order[i + len - 1]), left(order[i])));
    } else {
      adj.push_back(Adjacency::make(telomere("t." + std::to_string(++tel)), left(order[i])));
      adj.push_back(Adjacency::make(right(order[i + len - 1]), telomere("t." + std::to_string(++tel))));
    }
    i += len;
  }
  return DegenerateGenome(species, std::move(adj));
}

/// Resolved genome over the given marker names with random chromosomes.
inline DegenerateGenome random_genome_over(const std::string& species, const std::vector<std::string>& names,
                                          std::mt19937_64& rng) {
  auto g = random_resolved_genome(species, names.size(), rng);
  std::vector<Adjacency> adj;
  for (auto a : g.adjacencies()) {
    for (auto* e : {&a.first, &a.second}) {
      if (!e->is_telomere()) e->marker = names[std::stoul(e->marker) - 1];
    }
    adj.push_back(Adjacency::make(a.first, a.second));
  }
  return DegenerateGenome(species, adj);
}

/// Linearizable degenerate genome: a random genome over `names` plus random
/// extra adjacencies up to surfeit `max_surfeit`, all with random weights.
inline DegenerateGenome random_degenerate_over(const std::string& species, const std::vector<std::string>& names,
                                               double max_surfeit, std::mt19937_64& rng) {
  auto base = random_genome_over(species, names, rng);
  std::vector<Adjacency> adj(base.adjacencies().begin(), base.adjacencies().end());
  std::vector<Extremity> ext;
  for (const auto& n : names) {
    ext.push_back(tail_of(n));
    ext.push_back(head_of(n));
  }
  std::size_t next_telomere = base.telomere_count() + 1;
  const auto limit = static_cast<std::size_t>(max_surfeit * static_cast<double>(ext.size()) / 2);
  const std::size_t target = adj.size() + rng() % (limit > adj.size() ? limit - adj.size() + 1 : 1);
  for (int tries = 0; adj.size() < target && tries < 50; ++tries) {
    auto u = ext[rng() % ext.size()];
    Extremity v = rng() % 4 == 0 ? telomere("t." + std::to_string(next_telomere)) : ext[rng() % ext.size()];
    if (u == v) continue;
    auto cand = Adjacency::make(u, v);
    bool dup = false;
    for (const auto& a : adj) dup = dup || a.same_ends(cand);
    if (dup) continue;
    if (v.is_telomere()) ++next_telomere;
    adj.push_back(cand);
  }
  std::uniform_int_distribution<int> w(0, 4);
  for (auto& a : adj) a.weight = w(rng) / 4.0;
  return DegenerateGenome(species, adj);
}

/// Oracle-scale pair: at most `max_markers` markers per genome over two or
/// three families, at most two copies per family.
inline std::pair<DegenerateGenome, DegenerateGenome> random_degenerate_pair(std::mt19937_64& rng,
                                                                           std::size_t max_markers = 4,
                                                                           double max_surfeit = 2) {
  auto names_for = [&] {
    std::vector<std::string> names;
    const std::size_t families = 2 + rng() % 2;
    for (std::size_t f = 1; f <= families && names.size() < max_markers; ++f) {
      const std::size_t copies = rng() % 3;
      for (std::size_t c = 1; c <= copies && names.size() < max_markers; ++c) {
        names.push_back(std::to_string(f) + "." + std::to_string(c));
      }
    }
    if (names.empty()) names.push_back("1.1");
    return names;
  };
  auto a = random_degenerate_over("A", names_for(), max_surfeit, rng);
  auto b = random_degenerate_over("B", names_for(), max_surfeit, rng);
  return {a, b};
}

inline std::set<std::pair<std::string, std::string>> adjacency_set(const DegenerateGenome& g) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& a : g.adjacencies()) out.emplace(a.first.str(), a.second.str());
  return out;
}

}  // namespace testing
