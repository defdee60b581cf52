#include "sppdcj/solver.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "sppdcj/io.hpp"

namespace sppdcj {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::feasible_bounded: return "feasible-bounded";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::timeout: return "timeout";
  }
  return "?";
}

SolveStatus parse_status(std::string_view text) {
  if (text == "optimal") return SolveStatus::optimal;
  if (text == "feasible-bounded") return SolveStatus::feasible_bounded;
  if (text == "infeasible") return SolveStatus::infeasible;
  if (text == "timeout") return SolveStatus::timeout;
  throw Error("unknown solve status '" + std::string(text) + "'");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

class BranchAndBound {
 public:
  BranchAndBound(const IlpModel& model, const InternalBudget& budget) : model_(model), budget_(budget) {
    const auto n = model.variables().size();
    lb_.resize(n);
    ub_.resize(n);
    integer_.resize(n);
    one_first_.resize(n);
    cols_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const auto& v = model.variables()[j];
      if (!std::isfinite(v.lb) || !std::isfinite(v.ub)) {
        throw SolverError("internal solver needs finite bounds; variable " + v.name + " is unbounded");
      }
      integer_[j] = v.type != VarType::continuous;
      lb_[j] = integer_[j] ? std::ceil(v.lb - kEps) : v.lb;
      ub_[j] = integer_[j] ? std::floor(v.ub + kEps) : v.ub;
      one_first_[j] = v.name.rfind("z_", 0) == 0 || v.name.rfind("x_", 0) == 0;
    }
    // Every row becomes one or two `<=` rows.
    for (const auto& c : model.constraints()) {
      auto add = [&](double sign) {
        Row r;
        r.begin = terms_.size();
        for (const auto& t : c.terms) {
          if (t.coef == 0) continue;
          terms_.push_back({t.var, sign * t.coef});
        }
        r.end = terms_.size();
        r.rhs = sign * c.rhs;
        for (auto k = r.begin; k < r.end; ++k) cols_[terms_[k].var].push_back(rows_.size());
        rows_.push_back(r);
      };
      if (c.rel != Relation::ge) add(1);
      if (c.rel != Relation::le) add(-1);
    }
    queued_.assign(rows_.size(), 0);
  }

  SolveResult run() {
    start_ = Clock::now();
    SolveResult result;
    for (std::size_t r = 0; r < rows_.size(); ++r) enqueue(r);
    double root_bound = -std::numeric_limits<double>::infinity();
    if (propagate()) {
      root_bound = bound();
      search();
    }
    result.nodes = nodes_;
    result.wall_time = seconds_since(start_);
    if (!best_.empty()) {
      result.values = best_;
      result.objective = best_value_;
      if (stopped_) {
        result.status = SolveStatus::feasible_bounded;
        result.gap = std::max(0.0, root_bound - best_value_);
      } else {
        result.status = SolveStatus::optimal;
      }
    } else {
      result.status = stopped_ ? SolveStatus::timeout : SolveStatus::infeasible;
    }
    return result;
  }

 private:
  static constexpr double kEps = 1e-9;

  struct Row {
    std::size_t begin = 0, end = 0;
    double rhs = 0;
  };
  struct Change {
    std::size_t var;
    double lb, ub;
  };

  void enqueue(std::size_t r) {
    if (!queued_[r]) {
      queued_[r] = 1;
      queue_.push_back(r);
    }
  }

  bool set_bounds(std::size_t j, double lb, double ub) {
    if (lb <= lb_[j] + kEps && ub >= ub_[j] - kEps) return true;
    trail_.push_back({j, lb_[j], ub_[j]});
    lb_[j] = std::max(lb_[j], lb);
    ub_[j] = std::min(ub_[j], ub);
    if (lb_[j] > ub_[j] + budget_.tolerance) return false;
    if (lb_[j] > ub_[j]) lb_[j] = ub_[j];
    for (auto r : cols_[j]) enqueue(r);
    return true;
  }

  // Activity-based tightening of `<=` rows until nothing changes.
  bool propagate() {
    bool ok = true;
    while (!queue_.empty()) {
      auto r = queue_.back();
      queue_.pop_back();
      queued_[r] = 0;
      if (!ok) continue;
      const auto& row = rows_[r];
      double minact = 0;
      for (auto k = row.begin; k < row.end; ++k) {
        const auto& t = terms_[k];
        minact += t.coef > 0 ? t.coef * lb_[t.var] : t.coef * ub_[t.var];
      }
      if (minact > row.rhs + budget_.tolerance) {
        ok = false;
        continue;
      }
      for (auto k = row.begin; k < row.end && ok; ++k) {
        const auto& t = terms_[k];
        const double own = t.coef > 0 ? t.coef * lb_[t.var] : t.coef * ub_[t.var];
        const double limit = (row.rhs - (minact - own)) / t.coef;
        if (t.coef > 0) {
          double nub = integer_[t.var] ? std::floor(limit + budget_.tolerance) : limit;
          if (nub < ub_[t.var] - (integer_[t.var] ? 0.5 : 1e-7)) ok = set_bounds(t.var, lb_[t.var], nub);
        } else {
          double nlb = integer_[t.var] ? std::ceil(limit - budget_.tolerance) : limit;
          if (nlb > lb_[t.var] + (integer_[t.var] ? 0.5 : 1e-7)) ok = set_bounds(t.var, nlb, ub_[t.var]);
        }
      }
    }
    return ok;
  }

  void clear_queue() {
    for (auto r : queue_) queued_[r] = 0;
    queue_.clear();
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      const auto& c = trail_.back();
      lb_[c.var] = c.lb;
      ub_[c.var] = c.ub;
      trail_.pop_back();
    }
  }

  double bound() const {
    double b = 0;
    const auto& obj = model_.objective();
    for (std::size_t j = 0; j < obj.size(); ++j) {
      if (obj[j] != 0) b += std::max(obj[j] * lb_[j], obj[j] * ub_[j]);
    }
    return b;
  }

  bool out_of_budget() {
    if (stopped_) return true;
    if (nodes_ >= budget_.max_nodes) stopped_ = true;
    if ((nodes_ & 1023) == 0 && seconds_since(start_) > budget_.max_seconds) stopped_ = true;
    return stopped_;
  }

  void leaf() {
    std::vector<double> values(lb_.size());
    const auto& obj = model_.objective();
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (integer_[j]) {
        values[j] = std::round(lb_[j]);
      } else {
        values[j] = obj[j] < 0 ? lb_[j] : ub_[j];
      }
    }
    if (model_.max_violation(values) > budget_.tolerance) return;
    const double value = model_.objective_value(values);
    if (best_.empty() || value > best_value_ + kEps) {
      best_ = std::move(values);
      best_value_ = value;
    }
  }

  void search() {
    ++nodes_;
    if (out_of_budget()) return;
    if (!best_.empty() && bound() <= best_value_ + kEps) return;
    while (cursor_ < lb_.size() && (!integer_[cursor_] || ub_[cursor_] - lb_[cursor_] < 0.5)) ++cursor_;
    if (cursor_ == lb_.size()) {
      leaf();
      return;
    }
    const auto j = cursor_;
    const auto saved_cursor = cursor_;
    std::array<double, 2> order{lb_[j], ub_[j]};
    if (one_first_[j]) std::swap(order[0], order[1]);
    const bool binary_like = ub_[j] - lb_[j] < 1.5;
    if (binary_like) {
      for (double value : order) {
        const auto mark = trail_.size();
        if (set_bounds(j, value, value) && propagate()) search();
        clear_queue();
        undo(mark);
        cursor_ = saved_cursor;
        if (stopped_) return;
      }
    } else {
      // General integers: split the domain around its midpoint.
      const double mid = std::floor((lb_[j] + ub_[j]) / 2);
      std::array<std::pair<double, double>, 2> halves{{{lb_[j], mid}, {mid + 1, ub_[j]}}};
      for (auto [lo, hi] : halves) {
        const auto mark = trail_.size();
        if (set_bounds(j, lo, hi) && propagate()) search();
        clear_queue();
        undo(mark);
        cursor_ = saved_cursor;
        if (stopped_) return;
      }
    }
  }

  const IlpModel& model_;
  InternalBudget budget_;
  std::vector<double> lb_, ub_;
  std::vector<char> integer_, one_first_;
  std::vector<Term> terms_;
  std::vector<Row> rows_;
  std::vector<std::vector<std::size_t>> cols_;
  std::vector<std::size_t> queue_;
  std::vector<char> queued_;
  std::vector<Change> trail_;
  std::size_t cursor_ = 0;
  std::size_t nodes_ = 0;
  bool stopped_ = false;
  Clock::time_point start_;
  std::vector<double> best_;
  double best_value_ = 0;
};

}  // namespace

SolveResult solve_internal(const IlpModel& model, const InternalBudget& budget) {
  if (model.variables().size() > budget.max_variables) {
    throw SolverError("model has " + std::to_string(model.variables().size()) + " variables, above the internal cap of " +
                      std::to_string(budget.max_variables) + "; use external solver");
  }
  return BranchAndBound(model, budget).run();
}

std::optional<std::string> solver_from_environment() {
  const char* env = std::getenv("SPP_DCJ_SOLVER");
  if (env == nullptr || *env == '\0') return std::nullopt;
  return std::string(env);
}

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

std::string substitute(std::string text, const std::string& key, const std::string& value) {
  for (auto pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size())) {
    text.replace(pos, key.size(), value);
  }
  return text;
}

}  // namespace

SolveResult solve_external(const IlpModel& model, const std::string& lp_path, const std::string& sol_path,
                           const ExternalOptions& options) {
  if (options.command.find("{lp}") == std::string::npos || options.command.find("{sol}") == std::string::npos) {
    throw SolverError("solver command must contain {lp} and {sol}: " + options.command);
  }
  std::remove(sol_path.c_str());
  auto cmd = substitute(options.command, "{lp}", shell_quote(lp_path));
  cmd = substitute(cmd, "{sol}", shell_quote(sol_path));
  cmd = substitute(cmd, "{time}", format_number(options.time_limit));

  const auto start = Clock::now();
  FILE* pipe = ::popen((cmd + " 2>&1").c_str(), "r");
  if (pipe == nullptr) throw SolverError("cannot run solver command: " + cmd);
  std::string output;
  std::array<char, 4096> buf{};
  while (auto got = std::fread(buf.data(), 1, buf.size(), pipe)) output.append(buf.data(), got);
  const int status = ::pclose(pipe);
  const double elapsed = seconds_since(start);
  if (status != 0) {
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (output.size() > 4000) output = "..." + output.substr(output.size() - 4000);
    throw SolverError("solver command failed with exit code " + std::to_string(code) + ": " + cmd + "\n" + output);
  }
  auto file = read_solution(sol_path);
  SolveResult result;
  if (file.values.empty()) {
    result.status = file.status.value_or(SolveStatus::timeout);
    if (result.status == SolveStatus::optimal || result.status == SolveStatus::feasible_bounded) {
      throw SolverError("solution format: status " + std::string(to_string(result.status)) + " without values in " +
                        sol_path);
    }
  } else {
    result = to_result(model, file, options.tolerance);
  }
  result.wall_time = elapsed;
  return result;
}

void write_solution(std::ostream& out, const IlpModel& model, const SolveResult& result) {
  out << "# Status = " << to_string(result.status) << '\n';
  if (!result.has_solution()) return;
  out << "# Objective value = " << format_number(result.objective) << '\n';
  for (std::size_t j = 0; j < model.variables().size(); ++j) {
    out << model.variables()[j].name << ' ' << format_number(result.values[j]) << '\n';
  }
}

void write_solution(const std::string& path, const IlpModel& model, const SolveResult& result) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_solution(out, model, result);
}

SolutionFile parse_solution(std::istream& in, const std::string& name) {
  SolutionFile file;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line[0] == '#') {
      auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      auto key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(" \t"));
      key.erase(key.find_last_not_of(" \t") + 1);
      auto value = line.substr(eq + 1);
      value.erase(0, value.find_first_not_of(" \t"));
      value.erase(value.find_last_not_of(" \t") + 1);
      if (key == "Objective value") {
        try {
          file.objective = std::stod(value);
        } catch (const std::exception&) {
          throw ParseError(name, lineno, "solution format: bad objective '" + value + "'");
        }
      } else if (key == "Status") {
        try {
          file.status = parse_status(value);
        } catch (const Error&) {
          throw ParseError(name, lineno, "solution format: unknown status '" + value + "'");
        }
      }
      continue;
    }
    std::istringstream words(line);
    std::string var, value, extra;
    if (!(words >> var >> value) || (words >> extra)) {
      throw ParseError(name, lineno, "solution format: expected 'name value'");
    }
    double v = 0;
    try {
      std::size_t used = 0;
      v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw ParseError(name, lineno, "solution format: bad value '" + value + "'");
    }
    if (!file.values.emplace(var, v).second) throw ParseError(name, lineno, "solution format: duplicate " + var);
  }
  return file;
}

SolutionFile read_solution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SolverError("solver wrote no solution file " + path);
  return parse_solution(in, path);
}

SolveResult to_result(const IlpModel& model, const SolutionFile& file, double tolerance) {
  SolveResult result;
  result.status = file.status.value_or(SolveStatus::optimal);
  result.values.resize(model.variables().size());
  for (std::size_t j = 0; j < model.variables().size(); ++j) {
    const auto& v = model.variables()[j];
    auto it = file.values.find(v.name);
    if (it == file.values.end()) throw SolverError("solution misses variable " + v.name);
    double x = it->second;
    if (v.type != VarType::continuous) {
      const double r = std::round(x);
      if (std::abs(x - r) > tolerance) {
        throw SolverError("solution value " + format_number(x) + " of " + v.name + " is not integral");
      }
      x = r;
    }
    result.values[j] = x;
  }
  for (const auto& [name, value] : file.values) {
    if (model.find(name) == SIZE_MAX) throw SolverError("solution names unknown variable " + name);
  }
  const double violation = model.max_violation(result.values);
  if (violation > tolerance) {
    throw SolverError("solution violates the model by " + format_number(violation));
  }
  result.objective = model.objective_value(result.values);
  return result;
}

}  // namespace sppdcj
