#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sppdcj/genome.hpp"

namespace sppdcj {

class ModelError : public Error {
 public:
  using Error::Error;
};

enum class VarType : std::uint8_t { binary, integer, continuous };

struct Variable {
  std::string name;
  VarType type = VarType::binary;
  double lb = 0;
  double ub = 1;
  std::string kind;         // e.g. "adjacency", "label"
  std::string description;  // free text for the id map
};

struct Term {
  std::size_t var = 0;
  double coef = 0;
};

enum class Relation : std::uint8_t { le, ge, eq };

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Relation rel = Relation::le;
  double rhs = 0;
  std::string tag;  // constraint family, e.g. "sibling"
};

/// Linear maximisation model with named variables.
class IlpModel {
 public:
  std::size_t add_variable(Variable v);
  std::size_t add_binary(std::string name, std::string kind = {}, std::string description = {});
  std::size_t add_constraint(Constraint c);
  std::size_t add_constraint(std::string name, std::vector<Term> terms, Relation rel, double rhs, std::string tag);
  void add_objective(std::size_t var, double coef);

  std::size_t find(const std::string& name) const;  // npos-like SIZE_MAX if absent
  std::size_t at(const std::string& name) const;    // throws ModelError

  const std::vector<Variable>& variables() const noexcept { return variables_; }
  std::vector<Variable>& variables() noexcept { return variables_; }
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
  /// Objective coefficient per variable.
  const std::vector<double>& objective() const noexcept { return objective_; }
  double objective_value(const std::vector<double>& values) const;

  /// Largest violation of bounds, integrality and rows.
  double max_violation(const std::vector<double>& values) const;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::vector<double> objective_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// LP text: Maximize / Subject To / Bounds / Binaries / Generals / End.
void write_lp(std::ostream& out, const IlpModel& model);
void write_lp(const std::string& path, const IlpModel& model);

/// Reads the subset of the LP format written by write_lp. Variable order is
/// the order of first appearance in the Bounds section, then elsewhere.
IlpModel parse_lp(std::istream& in, const std::string& name = "<stream>");
IlpModel read_lp(const std::string& path);

/// `name<TAB>kind<TAB>description`, preceded by `# key value` header lines.
void write_idmap(std::ostream& out, const IlpModel& model, const std::map<std::string, std::string>& header);
void write_idmap(const std::string& path, const IlpModel& model, const std::map<std::string, std::string>& header);

struct IdMap {
  std::map<std::string, std::string> header;
  std::vector<std::string> names;
};

IdMap read_idmap(const std::string& path);

/// Replaces characters outside [A-Za-z0-9_.] by '_'.
std::string sanitize_name(std::string_view text);

}  // namespace sppdcj
