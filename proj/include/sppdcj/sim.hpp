#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "sppdcj/genome.hpp"
#include "sppdcj/io.hpp"

namespace sppdcj {

using Rng = std::mt19937_64;

struct EventRates {
  double inversion = 2;
  double transposition = 2;
  double duplication = 2;
  double deletion = 2;
};

/// Continuation probabilities of the geometric segment lengths.
struct EventExtensions {
  double inversion = 0.05;
  double transposition = 0.05;
  double duplication = 0.5;
  double deletion = 0.5;
};

struct SimConfig {
  std::uint64_t seed = 1;
  std::size_t root_markers = 100;
  std::size_t leaves = 10;
  double scale = 1;  // expected events per branch
  EventRates rates;
  EventExtensions extensions;
};

/// Oriented marker of a circular chromosome.
struct OrientedMarker {
  std::string name;
  bool forward = true;

  friend bool operator==(const OrientedMarker&, const OrientedMarker&) = default;
};

/// A single circular chromosome.
using CircularChromosome = std::vector<OrientedMarker>;

struct SimEvent {
  std::string branch;  // parent-child
  std::string type;    // inversion, transposition, duplication, deletion
  std::string params;  // key=value pairs separated by ';'
};

struct Simulation {
  Phylogeny tree;
  std::string root;
  std::map<std::string, std::string> parent;  // child -> parent
  std::vector<std::string> leaves;
  std::vector<std::string> ancestors;  // internal nodes, root first
  std::map<std::string, CircularChromosome> chromosomes;
  GenomeMap truth;
  std::vector<SimEvent> events;
};

/// Adjacencies of a circular chromosome, weight 1.
DegenerateGenome to_genome(const std::string& species, const CircularChromosome& chromosome);

/// Applies one logged event. Throws Error("extinct genome") when a deletion
/// would remove every marker.
void apply_event(CircularChromosome& chromosome, const SimEvent& event);

/// Random binary tree with leaves L1.. and internal nodes A1.. (A1 is the
/// root), then evolves a circular root genome along every branch.
Simulation evolve(const SimConfig& config, Rng& rng);
Simulation evolve(const SimConfig& config);

struct NoiseConfig {
  double target_surfeit = 1.2;
  double adversarial = 0;  // fraction of added adjacencies
};

/// Adds weight-1 adjacencies to `truth` until the surfeit reaches the target.
/// Adversarial adjacencies join extremities whose families and kinds form an
/// adjacency in `reference`; when those run out the rest is uniform and a
/// note is appended to `log`.
DegenerateGenome add_noise(const DegenerateGenome& truth, const DegenerateGenome& reference, const NoiseConfig& config,
                           Rng& rng, std::vector<std::string>& log);

/// Noisy genomes of all ancestors, top down: each ancestor takes its
/// parent's noisy genome as reference, the root takes its first child's truth.
/// Leaves keep their true genomes.
GenomeMap noisy_ancestors(const Simulation& sim, const NoiseConfig& config, Rng& rng, std::vector<std::string>& log);

/// Ancestral candidates from neighbouring genomes: every ancestor gets its
/// true adjacencies plus the true adjacencies of its tree neighbours whose
/// extremities both occur in it. Leaves keep their true genomes.
GenomeMap neighbour_projection(const Simulation& sim);

/// One family per marker name, numbered in name order. This is the orthology
/// of the true gene trees: a duplicated copy is a new lineage.
std::map<std::string, FamilyId> lineage_families(const Simulation& sim);

/// `branch<TAB>event<TAB>params`.
void write_events(std::ostream& out, const std::vector<SimEvent>& events);
void write_events(const std::string& path, const std::vector<SimEvent>& events);
std::vector<SimEvent> read_events(const std::string& path);

}  // namespace sppdcj
