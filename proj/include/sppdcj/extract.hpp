#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "sppdcj/genome.hpp"
#include "sppdcj/ilp.hpp"
#include "sppdcj/io.hpp"
#include "sppdcj/oracle.hpp"
#include "sppdcj/solver.hpp"

namespace sppdcj {

struct DistanceBreakdown {
  std::string a;
  std::string b;
  std::size_t n = 0;          // markers kept on both sides
  std::size_t telomeres = 0;  // telomeres and caps in the capped diagram
  std::size_t n_prime = 0;
  std::size_t cycles = 0;       // indel-free cycles
  std::size_t transitions = 0;  // run boundaries, summed over cycles with two or more runs
  std::size_t singletons = 0;   // circular singletons
  long long distance = 0;       // n' - cycles + transitions / 2 + singletons
};

struct Reconstruction {
  GenomeMap genomes;                      // derived genome per tree node
  std::vector<DistanceBreakdown> distances;  // per tree edge
  std::vector<MarkerMatching> matchings;     // per tree edge
  double weight_term = 0;
  double beta_term = 0;
  /// Objective recomputed from the decoded genomes and diagrams.
  double objective = 0;
  /// Objective of the solver's variable values.
  double solver_objective = 0;
};

/// Decodes a solution of `built`. Throws Error("infeasible decode ...")
/// naming the violated constraint family.
Reconstruction decode(const BuiltModel& built, const GenomeMap& genomes, const SolveResult& result,
                      double tolerance = 1e-6);

/// Distance report: `edge n_prime cycles transitions singletons distance`.
void write_distances(std::ostream& out, const std::vector<DistanceBreakdown>& rows);
void write_distances(const std::string& path, const std::vector<DistanceBreakdown>& rows);

struct NodeMetrics {
  std::string node;
  double precision = 1;
  double recall = 1;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

struct Metrics {
  std::vector<NodeMetrics> nodes;
  NodeMetrics mean;  // precision and recall averaged over nodes, counts summed
};

/// Compares adjacencies of every node of `truth` with `predicted`. Telomeric
/// adjacencies are compared by their non-telomeric end only.
Metrics evaluate(const GenomeMap& predicted, const GenomeMap& truth);

/// Metrics TSV: `node precision recall tp fp fn`, ending with a `mean` row.
void write_metrics(std::ostream& out, const Metrics& metrics);
void write_metrics(const std::string& path, const Metrics& metrics);

}  // namespace sppdcj
