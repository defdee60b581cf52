#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sppdcj/diagram.hpp"
#include "sppdcj/genome.hpp"
#include "sppdcj/io.hpp"

namespace sppdcj {

/// Instance exceeds the exhaustive search limits.
class ScaleError : public Error {
 public:
  using Error::Error;
};

struct OracleOptions {
  double alpha = 0.5;
  double beta = 0.25;
  /// complete: any telomere usage is allowed (caps on the deficient side).
  /// deficient: only usages the deficient-side capping can realise, mirroring the ILP.
  Capping capping = Capping::complete;
  std::size_t bound = 24;  // total extremities of both genomes
};

/// Pairs of marker names (A marker, B marker) kept on both sides.
using MarkerMatching = std::vector<std::pair<std::string, std::string>>;

struct OracleResult {
  /// Objective in maximisation form:
  /// (1-a-b) * weights + a * sum_C (1 - [no extremity edge] - lambda(C)) - b * telomeres.
  double value = 0;
  double alpha_term = 0;  // best sum over components
  std::size_t distance = 0;  // n' minus alpha_term for the returned optimum
  DegenerateGenome a;
  DegenerateGenome b;
  MarkerMatching matching;
  std::size_t evaluated = 0;  // telomere matchings scored
};

/// Exhaustive solution of the weighted degenerate distance problem.
OracleResult brute_force_distance(const DegenerateGenome& a, const DegenerateGenome& b,
                                  const FamilyAssignment& families, const OracleOptions& options = {});

/// DCJ-indel distance of two genomes under every resolved assignment,
/// minimised over assignments and cappings.
std::size_t brute_force_dcj_indel(const DegenerateGenome& a, const DegenerateGenome& b,
                                  const FamilyAssignment& families);

struct SppOracleResult {
  double value = 0;
  GenomeMap derived;
};

/// Exhaustive small parsimony over a phylogeny (product of derived genomes).
SppOracleResult brute_force_spp(const Phylogeny& tree, const GenomeMap& genomes, const FamilyAssignment& families,
                                const OracleOptions& options = {}, std::size_t max_combinations = 2'000'000);

}  // namespace sppdcj
