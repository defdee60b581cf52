#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sppdcj/model.hpp"

namespace sppdcj {

class SolverError : public Error {
 public:
  using Error::Error;
};

enum class SolveStatus { optimal, feasible_bounded, infeasible, timeout };

const char* to_string(SolveStatus status);
SolveStatus parse_status(std::string_view text);

struct SolveResult {
  SolveStatus status = SolveStatus::infeasible;
  double objective = 0;
  std::vector<double> values;  // per model variable; empty without a solution
  double gap = 0;
  double wall_time = 0;
  std::size_t nodes = 0;

  bool has_solution() const noexcept { return !values.empty(); }
};

struct InternalBudget {
  std::size_t max_nodes = 50'000'000;
  double max_seconds = 600;
  std::size_t max_variables = 5'000;
  double tolerance = 1e-6;
};

/// Depth-first branch and bound with bound propagation. Throws SolverError
/// ("use external solver") above `max_variables`.
SolveResult solve_internal(const IlpModel& model, const InternalBudget& budget = {});

struct ExternalOptions {
  std::string command;       // template with {lp}, {sol} and optionally {time}
  double time_limit = 3600;  // seconds, substituted for {time}
  double tolerance = 1e-6;
};

/// Command template from SPP_DCJ_SOLVER, if set.
std::optional<std::string> solver_from_environment();

/// Runs an external MILP solver on an LP file already written at `lp_path`
/// and reads its solution from `sol_path`.
SolveResult solve_external(const IlpModel& model, const std::string& lp_path, const std::string& sol_path,
                           const ExternalOptions& options);

/// `# Status = ...`, `# Objective value = ...`, then `name value` lines.
void write_solution(std::ostream& out, const IlpModel& model, const SolveResult& result);
void write_solution(const std::string& path, const IlpModel& model, const SolveResult& result);

struct SolutionFile {
  std::optional<SolveStatus> status;
  std::optional<double> objective;
  std::map<std::string, double, std::less<>> values;
};

/// Throws ParseError ("solution format") on malformed lines.
SolutionFile parse_solution(std::istream& in, const std::string& name = "<stream>");
SolutionFile read_solution(const std::string& path);

/// Maps a parsed solution onto the model's variables, rounding values within
/// `tolerance` of an integer. Throws SolverError for missing variables or
/// rows violated by more than `tolerance`.
SolveResult to_result(const IlpModel& model, const SolutionFile& file, double tolerance = 1e-6);

}  // namespace sppdcj
