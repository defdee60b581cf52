#include "sppdcj/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "sppdcj/io.hpp"

namespace sppdcj {

std::string sanitize_name(std::string_view text) {
  std::string out(text);
  for (auto& c : out) {
    bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return out;
}

std::size_t IlpModel::add_variable(Variable v) {
  if (v.lb > v.ub) throw ModelError("variable " + v.name + " has empty domain");
  auto [it, fresh] = index_.emplace(v.name, variables_.size());
  if (!fresh) throw ModelError("duplicate variable " + v.name);
  variables_.push_back(std::move(v));
  objective_.push_back(0.0);
  return variables_.size() - 1;
}

std::size_t IlpModel::add_binary(std::string name, std::string kind, std::string description) {
  return add_variable({std::move(name), VarType::binary, 0, 1, std::move(kind), std::move(description)});
}

std::size_t IlpModel::add_constraint(Constraint c) {
  if (c.terms.empty()) throw ModelError("constraint " + c.name + " has no terms");
  std::vector<std::size_t> vars;
  for (const auto& t : c.terms) {
    if (t.var >= variables_.size()) throw ModelError("constraint " + c.name + " references an undeclared variable");
    vars.push_back(t.var);
  }
  std::sort(vars.begin(), vars.end());
  if (std::adjacent_find(vars.begin(), vars.end()) != vars.end()) {
    throw ModelError("constraint " + c.name + " repeats a variable");
  }
  constraints_.push_back(std::move(c));
  return constraints_.size() - 1;
}

std::size_t IlpModel::add_constraint(std::string name, std::vector<Term> terms, Relation rel, double rhs,
                                     std::string tag) {
  return add_constraint(Constraint{std::move(name), std::move(terms), rel, rhs, std::move(tag)});
}

void IlpModel::add_objective(std::size_t var, double coef) { objective_.at(var) += coef; }

std::size_t IlpModel::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? SIZE_MAX : it->second;
}

std::size_t IlpModel::at(const std::string& name) const {
  auto k = find(name);
  if (k == SIZE_MAX) throw ModelError("unknown variable " + name);
  return k;
}

double IlpModel::objective_value(const std::vector<double>& values) const {
  double sum = 0;
  for (std::size_t j = 0; j < objective_.size(); ++j) sum += objective_[j] * values[j];
  return sum;
}

double IlpModel::max_violation(const std::vector<double>& values) const {
  double worst = 0;
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    const auto& v = variables_[j];
    worst = std::max({worst, v.lb - values[j], values[j] - v.ub});
    if (v.type != VarType::continuous) worst = std::max(worst, std::abs(values[j] - std::round(values[j])));
  }
  for (const auto& c : constraints_) {
    double lhs = 0;
    for (const auto& t : c.terms) lhs += t.coef * values[t.var];
    switch (c.rel) {
      case Relation::le: worst = std::max(worst, lhs - c.rhs); break;
      case Relation::ge: worst = std::max(worst, c.rhs - lhs); break;
      case Relation::eq: worst = std::max(worst, std::abs(lhs - c.rhs)); break;
    }
  }
  return worst;
}

namespace {

constexpr std::size_t kLineWidth = 100;

class LineWriter {
 public:
  explicit LineWriter(std::ostream& out) : out_(out) {}

  void start(const std::string& head) {
    out_ << head;
    width_ = head.size();
  }
  void token(const std::string& text) {
    if (width_ + 1 + text.size() > kLineWidth) {
      out_ << "\n  ";
      width_ = 2;
    } else {
      out_ << ' ';
      ++width_;
    }
    out_ << text;
    width_ += text.size();
  }
  void finish() { out_ << '\n'; }

 private:
  std::ostream& out_;
  std::size_t width_ = 0;
};

void write_terms(LineWriter& w, const IlpModel& model, const std::vector<Term>& terms) {
  bool first = true;
  for (const auto& t : terms) {
    const double mag = std::abs(t.coef);
    std::string text;
    if (t.coef < 0) {
      text = "- ";
    } else if (!first) {
      text = "+ ";
    }
    if (mag != 1.0) text += format_number(mag) + " ";
    text += model.variables()[t.var].name;
    w.token(text);
    first = false;
  }
}

const char* relation_text(Relation r) {
  switch (r) {
    case Relation::le: return "<=";
    case Relation::ge: return ">=";
    case Relation::eq: return "=";
  }
  return "=";
}

std::string bound_text(double v) {
  if (v == std::numeric_limits<double>::infinity()) return "+inf";
  if (v == -std::numeric_limits<double>::infinity()) return "-inf";
  return format_number(v);
}

}  // namespace

void write_lp(std::ostream& out, const IlpModel& model) {
  LineWriter w(out);
  out << "Maximize\n";
  std::vector<Term> obj;
  for (std::size_t j = 0; j < model.objective().size(); ++j) {
    if (model.objective()[j] != 0.0) obj.push_back({j, model.objective()[j]});
  }
  w.start(" obj:");
  if (obj.empty()) {
    w.token("0");
  } else {
    write_terms(w, model, obj);
  }
  w.finish();

  out << "Subject To\n";
  for (const auto& c : model.constraints()) {
    w.start(" " + c.name + ":");
    write_terms(w, model, c.terms);
    w.token(relation_text(c.rel));
    w.token(format_number(c.rhs));
    w.finish();
  }

  if (!model.variables().empty()) out << "Bounds\n";
  for (const auto& v : model.variables()) {
    if (v.ub == std::numeric_limits<double>::infinity()) {
      out << ' ' << v.name << " >= " << bound_text(v.lb) << '\n';
    } else {
      out << ' ' << bound_text(v.lb) << " <= " << v.name << " <= " << bound_text(v.ub) << '\n';
    }
  }

  auto section = [&](const char* title, VarType type) {
    bool any = std::any_of(model.variables().begin(), model.variables().end(),
                           [&](const Variable& v) { return v.type == type; });
    if (!any) return;
    out << title << '\n';
    w.start("");
    bool first = true;
    for (const auto& v : model.variables()) {
      if (v.type != type) continue;
      if (first) {
        out << ' ' << v.name;
        w.start(" " + v.name);
        first = false;
      } else {
        w.token(v.name);
      }
    }
    w.finish();
  };
  section("Binaries", VarType::binary);
  section("Generals", VarType::integer);
  out << "End\n";
}

void write_lp(const std::string& path, const IlpModel& model) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_lp(out, model);
  if (!out) throw Error("write failed for " + path);
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool parse_number(const std::string& tok, double& value) {
  if (tok == "+inf" || tok == "inf" || tok == "+infinity" || tok == "infinity") {
    value = std::numeric_limits<double>::infinity();
    return true;
  }
  if (tok == "-inf" || tok == "-infinity") {
    value = -std::numeric_limits<double>::infinity();
    return true;
  }
  const char* begin = tok.data();
  if (!tok.empty() && tok[0] == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, tok.data() + tok.size(), value);
  return ec == std::errc{} && ptr == tok.data() + tok.size();
}

bool is_relation(const std::string& tok) {
  return tok == "<=" || tok == ">=" || tok == "=" || tok == "=<" || tok == "=>" || tok == "<" || tok == ">";
}

Relation relation_of(const std::string& tok) {
  if (tok == "<=" || tok == "=<" || tok == "<") return Relation::le;
  if (tok == ">=" || tok == "=>" || tok == ">") return Relation::ge;
  return Relation::eq;
}

enum class Section { none, objective, constraints, bounds, binaries, generals, end };

Section section_of(const std::string& line_lower) {
  if (line_lower == "maximize" || line_lower == "maximise" || line_lower == "max" || line_lower == "minimize" ||
      line_lower == "minimise" || line_lower == "min")
    return Section::objective;
  if (line_lower == "subject to" || line_lower == "such that" || line_lower == "st" || line_lower == "s.t.")
    return Section::constraints;
  if (line_lower == "bounds" || line_lower == "bound") return Section::bounds;
  if (line_lower == "binaries" || line_lower == "binary" || line_lower == "bin") return Section::binaries;
  if (line_lower == "generals" || line_lower == "general" || line_lower == "gen") return Section::generals;
  if (line_lower == "end") return Section::end;
  return Section::none;
}

}  // namespace

IlpModel parse_lp(std::istream& in, const std::string& name) {
  struct Tok {
    std::string text;
    std::size_t line;
  };
  std::vector<Tok> objective_toks, constraint_toks;
  std::vector<std::vector<Tok>> bound_lines;
  std::vector<Tok> binaries, generals;
  bool minimize = false;

  Section section = Section::none;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto c = line.find('\\'); c != std::string::npos) line.erase(c);
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
    trimmed.erase(trimmed.find_last_not_of(" \t\r") + 1);
    if (trimmed.empty()) continue;
    auto s = section_of(lower(trimmed));
    if (s != Section::none) {
      section = s;
      if (s == Section::objective) minimize = lower(trimmed).rfind("min", 0) == 0;
      if (s == Section::end) break;
      continue;
    }
    std::istringstream words(trimmed);
    std::vector<Tok> toks;
    std::string w;
    while (words >> w) toks.push_back({w, lineno});
    switch (section) {
      case Section::objective: objective_toks.insert(objective_toks.end(), toks.begin(), toks.end()); break;
      case Section::constraints: constraint_toks.insert(constraint_toks.end(), toks.begin(), toks.end()); break;
      case Section::bounds: bound_lines.push_back(toks); break;
      case Section::binaries: binaries.insert(binaries.end(), toks.begin(), toks.end()); break;
      case Section::generals: generals.insert(generals.end(), toks.begin(), toks.end()); break;
      default: throw ParseError(name, lineno, "text outside of any section");
    }
  }
  if (section != Section::end) throw ParseError(name, lineno, "missing End");

  IlpModel model;
  auto var = [&](const std::string& v) {
    auto k = model.find(v);
    if (k != SIZE_MAX) return k;
    return model.add_variable({v, VarType::continuous, 0.0, std::numeric_limits<double>::infinity(), {}, {}});
  };

  // Bounds first so that their order fixes variable order.
  for (const auto& toks : bound_lines) {
    auto fail = [&] { throw ParseError(name, toks.front().line, "unsupported bound line"); };
    double lo = 0, hi = 0;
    if (toks.size() == 5 && parse_number(toks[0].text, lo) && is_relation(toks[1].text) &&
        is_relation(toks[3].text) && parse_number(toks[4].text, hi)) {
      auto k = var(toks[2].text);
      model.variables()[k].lb = lo;
      model.variables()[k].ub = hi;
    } else if (toks.size() == 2 && lower(toks[1].text) == "free") {
      auto k = var(toks[0].text);
      model.variables()[k].lb = -std::numeric_limits<double>::infinity();
    } else if (toks.size() == 3 && is_relation(toks[1].text) && parse_number(toks[2].text, lo)) {
      auto k = var(toks[0].text);
      switch (relation_of(toks[1].text)) {
        case Relation::ge: model.variables()[k].lb = lo; break;
        case Relation::le: model.variables()[k].ub = lo; break;
        case Relation::eq: model.variables()[k].lb = model.variables()[k].ub = lo; break;
      }
    } else {
      fail();
    }
  }

  // Expression parser shared by objective and rows.
  auto parse_terms = [&](const std::vector<Tok>& toks, std::size_t& i, std::vector<Term>& terms) {
    double sign = 1, coef = 1;
    bool have_coef = false;
    while (i < toks.size() && !is_relation(toks[i].text) && toks[i].text.back() != ':') {
      const auto& t = toks[i].text;
      double num = 0;
      if (t == "+") {
        sign = 1;
      } else if (t == "-") {
        sign = -1;
      } else if (parse_number(t, num)) {
        coef = num;
        have_coef = true;
      } else {
        auto k = var(t);
        terms.push_back({k, sign * coef});
        sign = 1;
        coef = 1;
        have_coef = false;
      }
      ++i;
    }
    return have_coef ? sign * coef : 0.0;  // trailing constant
  };

  {
    std::size_t i = 0;
    if (i < objective_toks.size() && objective_toks[i].text.back() == ':') ++i;
    std::vector<Term> terms;
    parse_terms(objective_toks, i, terms);
    if (i != objective_toks.size()) throw ParseError(name, objective_toks[i].line, "unexpected token in objective");
    for (const auto& t : terms) model.add_objective(t.var, minimize ? -t.coef : t.coef);
  }

  std::size_t i = 0;
  std::size_t unnamed = 0;
  while (i < constraint_toks.size()) {
    Constraint c;
    const auto line_of_row = constraint_toks[i].line;
    if (constraint_toks[i].text.back() == ':') {
      c.name = constraint_toks[i].text.substr(0, constraint_toks[i].text.size() - 1);
      ++i;
    } else {
      c.name = "r" + std::to_string(++unnamed);
    }
    parse_terms(constraint_toks, i, c.terms);
    {
      std::vector<Term> merged;
      for (const auto& t : c.terms) {
        auto it = std::find_if(merged.begin(), merged.end(), [&](const Term& m) { return m.var == t.var; });
        if (it == merged.end()) {
          merged.push_back(t);
        } else {
          it->coef += t.coef;
        }
      }
      c.terms = std::move(merged);
    }
    if (i + 1 >= constraint_toks.size() || !is_relation(constraint_toks[i].text)) {
      throw ParseError(name, line_of_row, "constraint " + c.name + " lacks relation and right-hand side");
    }
    c.rel = relation_of(constraint_toks[i].text);
    if (!parse_number(constraint_toks[i + 1].text, c.rhs)) {
      throw ParseError(name, constraint_toks[i + 1].line, "bad right-hand side '" + constraint_toks[i + 1].text + "'");
    }
    i += 2;
    model.add_constraint(std::move(c));
  }

  for (const auto& t : binaries) {
    auto k = var(t.text);
    auto& v = model.variables()[k];
    v.type = VarType::binary;
    v.lb = std::max(v.lb, 0.0);
    v.ub = std::min(v.ub, 1.0);
  }
  for (const auto& t : generals) model.variables()[var(t.text)].type = VarType::integer;
  return model;
}

IlpModel read_lp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return parse_lp(in, path);
}

void write_idmap(std::ostream& out, const IlpModel& model, const std::map<std::string, std::string>& header) {
  for (const auto& [k, v] : header) out << "# " << k << ' ' << v << '\n';
  for (const auto& v : model.variables()) out << v.name << '\t' << v.kind << '\t' << v.description << '\n';
}

void write_idmap(const std::string& path, const IlpModel& model, const std::map<std::string, std::string>& header) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_idmap(out, model, header);
}

IdMap read_idmap(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  IdMap map;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream words(line.substr(1));
      std::string key, value;
      if (words >> key >> value) map.header[key] = value;
      continue;
    }
    auto cols = split_tabs(line);
    if (cols.size() != 3) throw ParseError(path, lineno, "expected 'name<TAB>kind<TAB>description'");
    map.names.push_back(cols[0]);
  }
  return map;
}

}  // namespace sppdcj
