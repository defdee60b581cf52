#pragma once

#include <string>

#include "sppdcj/extract.hpp"
#include "sppdcj/ilp.hpp"
#include "sppdcj/solver.hpp"

namespace sppdcj {

struct SolverChoice {
  bool internal = true;
  std::string command;  // external command template, used when !internal
  double time_limit = 3600;
  InternalBudget budget;
  std::string work_dir;  // LP and solution files of external runs; a temporary directory if empty
};

/// Solver from the environment when SPP_DCJ_SOLVER is set, else internal.
SolverChoice default_solver();

/// Solves with the chosen solver. External runs write `model.lp` and
/// `solution.sol` into `work_dir`.
SolveResult solve(const IlpModel& model, const SolverChoice& solver);

struct PipelineRun {
  BuiltModel built;
  SolveResult result;
  Reconstruction reconstruction;
};

/// build, solve and decode. Throws SolverError when no solution was found.
PipelineRun run_pipeline(const Phylogeny& tree, const GenomeMap& genomes, const FamilyAssignment& families,
                         const BuildOptions& options, const SolverChoice& solver);

/// DCJ-indel distance of two genomes via a two-node phylogeny with alpha 1
/// and beta 0. Equal species names are disambiguated.
DistanceBreakdown pairwise_distance(const DegenerateGenome& a, const DegenerateGenome& b,
                                    const FamilyAssignment& families, const SolverChoice& solver,
                                    Capping capping = Capping::deficient);

}  // namespace sppdcj
