#include "sppdcj/pipeline.hpp"

#include <cstdlib>
#include <filesystem>

namespace sppdcj {

namespace fs = std::filesystem;

SolverChoice default_solver() {
  SolverChoice s;
  if (auto cmd = solver_from_environment()) {
    s.internal = false;
    s.command = *cmd;
  }
  return s;
}

SolveResult solve(const IlpModel& model, const SolverChoice& solver) {
  if (solver.internal) {
    auto budget = solver.budget;
    budget.max_seconds = std::min(budget.max_seconds, solver.time_limit);
    return solve_internal(model, budget);
  }
  fs::path dir = solver.work_dir;
  bool scratch = false;
  if (dir.empty()) {
    std::string pattern = (fs::temp_directory_path() / "spp-dcj-XXXXXX").string();
    if (::mkdtemp(pattern.data()) == nullptr) throw SolverError("cannot create a temporary directory");
    dir = pattern;
    scratch = true;
  } else {
    fs::create_directories(dir);
  }
  const auto lp = (dir / "model.lp").string();
  const auto sol = (dir / "solution.sol").string();
  ExternalOptions opt;
  opt.command = solver.command;
  opt.time_limit = solver.time_limit;
  opt.tolerance = solver.budget.tolerance;
  try {
    write_lp(lp, model);
    auto result = solve_external(model, lp, sol, opt);
    if (scratch) fs::remove_all(dir);
    return result;
  } catch (...) {
    if (scratch) fs::remove_all(dir);
    throw;
  }
}

PipelineRun run_pipeline(const Phylogeny& tree, const GenomeMap& genomes, const FamilyAssignment& families,
                         const BuildOptions& options, const SolverChoice& solver) {
  PipelineRun run;
  run.built = build_model(tree, genomes, families, options);
  run.result = solve(run.built.model, solver);
  if (!run.result.has_solution()) {
    throw SolverError(std::string("no solution: solver status ") + to_string(run.result.status));
  }
  run.reconstruction = decode(run.built, genomes, run.result);
  return run;
}

DistanceBreakdown pairwise_distance(const DegenerateGenome& a, const DegenerateGenome& b,
                                    const FamilyAssignment& families, const SolverChoice& solver, Capping capping) {
  GenomeMap genomes;
  const std::string name_a = a.species();
  std::string name_b = b.species();
  while (name_b == name_a) name_b += ".b";
  genomes.emplace(name_a, a);
  genomes.emplace(name_b, DegenerateGenome(name_b, {b.adjacencies().begin(), b.adjacencies().end()}));
  Phylogeny tree(std::vector<std::pair<std::string, std::string>>{{name_a, name_b}});
  BuildOptions options;
  options.alpha = 1;
  options.beta = 0;
  options.capping = capping;
  auto run = run_pipeline(tree, genomes, families, options, solver);
  return run.reconstruction.distances.front();
}

}  // namespace sppdcj
