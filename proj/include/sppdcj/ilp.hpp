#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "sppdcj/diagram.hpp"
#include "sppdcj/genome.hpp"
#include "sppdcj/io.hpp"
#include "sppdcj/model.hpp"

namespace sppdcj {

struct BuildOptions {
  double alpha = 0.5;
  double beta = 0.25;
  bool optional_constraints = true;  // transition support and even telomere rows
  Capping capping = Capping::deficient;
  bool reduce_telomeres = true;
  std::size_t singleton_cap = 100'000;
  std::size_t jobs = 1;
  bool check_linearizable = true;
  std::size_t linearize_budget = 1'000'000;
};

/// Variables of one genome, shared by every diagram of that genome.
struct SpeciesVars {
  std::string species;
  std::string tag;                     // sanitized name used in variable names
  std::size_t degree = 0;              // in the phylogeny
  std::vector<std::size_t> adjacency;  // per adjacency index
  std::vector<std::size_t> presence;   // per extremity index
  std::size_t chromosomes = npos;      // a_<tag>, present with optional rows
};

/// Variables of one diagram, indexed like the diagram's nodes and edges.
struct DiagramVars {
  std::vector<std::size_t> edge;      // selection variable of each edge
  std::vector<std::size_t> presence;  // o of real extremities, oc of caps
  std::vector<std::size_t> label;     // y
  std::vector<std::size_t> cycle;     // z, npos for telomeres
  std::vector<std::size_t> run;       // r
  std::vector<std::size_t> transition;  // t
  std::vector<std::size_t> singleton;   // s, per candidate
  std::size_t cap_side = npos;          // u, complete capping only
};

struct BuiltModel {
  BuildOptions options;
  IlpModel model;
  std::vector<MultiRelationalDiagram> diagrams;  // one per tree edge, in tree order
  std::vector<DiagramVars> diagram_vars;
  std::map<std::string, SpeciesVars, std::less<>> species_vars;
  std::vector<std::string> warnings;
};

/// Throws GenomeError naming the species and a component when a genome has
/// no derived genome. Returns false if the search budget ran out first.
bool check_linearizable(const DegenerateGenome& genome, std::size_t budget = 1'000'000);

/// The integer program over all edges of `tree`.
BuiltModel build_model(const Phylogeny& tree, const GenomeMap& genomes, const FamilyAssignment& families,
                       const BuildOptions& options = {});

/// Options as written to the id map header.
std::map<std::string, std::string> idmap_header(const BuildOptions& options);
/// Inverse of idmap_header; missing keys keep their defaults.
BuildOptions options_from_header(const std::map<std::string, std::string>& header);

}  // namespace sppdcj
