#include "sppdcj/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace sppdcj {

ParseError::ParseError(std::string file, std::size_t line, const std::string& message)
    : Error(file + ":" + std::to_string(line) + ": " + message), file_(std::move(file)), line_(line) {}

std::vector<std::string> split_tabs(const std::string& line) {
  std::string_view text = line;
  if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto tab = text.find('\t', start);
    out.emplace_back(text.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

namespace {

bool skip_line(const std::string& line) {
  auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

double parse_double(const std::string& text, const std::string& name, std::size_t line) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError(name, line, "bad number '" + text + "'");
  }
  return value;
}

struct PendingGenome {
  std::vector<Adjacency> adjacencies;
  std::vector<std::size_t> lines;
};

}  // namespace

GenomeMap parse_adjacencies(std::istream& in, const std::string& name) {
  std::map<std::string, PendingGenome> pending;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    auto cols = split_tabs(line);
    if (cols.size() != 3 && cols.size() != 4) {
      throw ParseError(name, lineno, "expected 3 or 4 tab-separated columns, got " + std::to_string(cols.size()));
    }
    if (cols[0].empty()) throw ParseError(name, lineno, "empty species");
    double weight = cols.size() == 4 ? parse_double(cols[3], name, lineno) : 1.0;
    try {
      auto a = Adjacency::make(Extremity::parse(cols[1]), Extremity::parse(cols[2]), weight);
      auto& g = pending[cols[0]];
      g.adjacencies.push_back(std::move(a));
      g.lines.push_back(lineno);
    } catch (const GenomeError& e) {
      throw ParseError(name, lineno, e.what());
    }
  }

  GenomeMap out;
  for (auto& [species, g] : pending) {
    // Report duplicates against the line of their second occurrence.
    std::map<std::pair<std::string, std::string>, std::size_t> seen;
    for (std::size_t i = 0; i < g.adjacencies.size(); ++i) {
      auto key = std::pair{g.adjacencies[i].first.str(), g.adjacencies[i].second.str()};
      if (auto [it, fresh] = seen.emplace(key, g.lines[i]); !fresh) {
        throw ParseError(name, g.lines[i],
                         "duplicate adjacency {" + key.first + ", " + key.second + "} of " + species +
                             " (first on line " + std::to_string(it->second) + ")");
      }
    }
    try {
      DegenerateGenome genome(species, std::move(g.adjacencies));
      genome.check_closure();
      out.emplace(species, std::move(genome));
    } catch (const GenomeError& e) {
      throw ParseError(name, g.lines.front(), e.what());
    }
  }
  return out;
}

GenomeMap read_adjacencies(const std::string& path) {
  auto in = open_input(path);
  return parse_adjacencies(in, path);
}

void write_adjacencies(std::ostream& out, const GenomeMap& genomes) {
  struct Row {
    std::string species, a, b;
    double w;
  };
  std::vector<Row> rows;
  for (const auto& [species, g] : genomes) {
    for (const auto& adj : g.adjacencies()) {
      auto a = adj.first.str();
      auto b = adj.second.str();
      if (b < a) std::swap(a, b);
      rows.push_back({species, std::move(a), std::move(b), adj.weight});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
    return std::tie(x.species, x.a, x.b) < std::tie(y.species, y.a, y.b);
  });
  for (const auto& r : rows) out << r.species << '\t' << r.a << '\t' << r.b << '\t' << format_number(r.w) << '\n';
}

void write_adjacencies(const std::string& path, const GenomeMap& genomes) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_adjacencies(out, genomes);
}

std::string format_adjacencies(const GenomeMap& genomes) {
  std::ostringstream out;
  write_adjacencies(out, genomes);
  return out.str();
}

Phylogeny parse_phylogeny(std::istream& in, const std::string& name) {
  std::vector<std::pair<std::string, std::string>> edges;
  std::string line;
  std::size_t lineno = 0;
  std::size_t last = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    auto cols = split_tabs(line);
    if (cols.size() != 2 || cols[0].empty() || cols[1].empty()) {
      throw ParseError(name, lineno, "expected 'nodeA<TAB>nodeB'");
    }
    edges.emplace_back(cols[0], cols[1]);
    last = lineno;
  }
  try {
    return Phylogeny(std::move(edges));
  } catch (const GenomeError& e) {
    throw ParseError(name, last, e.what());
  }
}

Phylogeny read_phylogeny(const std::string& path) {
  auto in = open_input(path);
  return parse_phylogeny(in, path);
}

void write_phylogeny(std::ostream& out, const Phylogeny& tree) {
  for (const auto& [a, b] : tree.edges()) out << a << '\t' << b << '\n';
}

FamilyAssignment parse_family_map(std::istream& in, const std::string& name) {
  auto families = FamilyAssignment::explicit_only();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    auto cols = split_tabs(line);
    if (cols.size() != 2 || cols[0].empty()) throw ParseError(name, lineno, "expected 'marker<TAB>family'");
    FamilyId id = 0;
    auto [ptr, ec] = std::from_chars(cols[1].data(), cols[1].data() + cols[1].size(), id);
    if (ec != std::errc{} || ptr != cols[1].data() + cols[1].size()) {
      throw ParseError(name, lineno, "family must be an integer, got '" + cols[1] + "'");
    }
    families.assign(cols[0], id);
  }
  return families;
}

FamilyAssignment read_family_map(const std::string& path) {
  auto in = open_input(path);
  return parse_family_map(in, path);
}

FamilyAssignment explicit_families(const std::map<std::string, FamilyId>& families) {
  auto out = FamilyAssignment::explicit_only();
  for (const auto& [marker, id] : families) out.assign(marker, id);
  return out;
}

void write_family_map(std::ostream& out, const std::map<std::string, FamilyId>& families) {
  for (const auto& [marker, id] : families) out << marker << '\t' << id << '\n';
}

void write_family_map(const std::string& path, const std::map<std::string, FamilyId>& families) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_family_map(out, families);
}

}  // namespace sppdcj
