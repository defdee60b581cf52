#include "sppdcj/extract.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>

namespace sppdcj {

namespace {

[[noreturn]] void fail(const std::string& tag, const std::string& detail) {
  throw Error("infeasible decode (" + tag + "): " + detail);
}

bool on(const SolveResult& r, std::size_t var) { return r.values.at(var) > 0.5; }

}  // namespace

Reconstruction decode(const BuiltModel& built, const GenomeMap& genomes, const SolveResult& result,
                      double tolerance) {
  if (!result.has_solution()) throw Error("no solution to decode (status " + std::string(to_string(result.status)) + ")");
  const auto& model = built.model;
  if (result.values.size() != model.variables().size()) throw Error("solution does not match the model");

  for (const auto& c : model.constraints()) {
    double lhs = 0;
    for (const auto& t : c.terms) lhs += t.coef * result.values[t.var];
    double viol = 0;
    switch (c.rel) {
      case Relation::le: viol = lhs - c.rhs; break;
      case Relation::ge: viol = c.rhs - lhs; break;
      case Relation::eq: viol = std::abs(lhs - c.rhs); break;
    }
    if (viol > tolerance) fail(c.tag, "row " + c.name + " violated by " + format_number(viol));
  }

  Reconstruction rec;
  const auto& opt = built.options;
  const double weight_scale = 1.0 - opt.alpha - opt.beta;

  for (const auto& [species, sv] : built.species_vars) {
    const auto& parent = genomes.find(species)->second;
    std::vector<Adjacency> chosen;
    auto adjs = parent.adjacencies();
    for (std::size_t i = 0; i < adjs.size(); ++i) {
      if (!on(result, sv.adjacency[i])) continue;
      chosen.push_back(adjs[i]);
      rec.weight_term += weight_scale * adjs[i].weight * static_cast<double>(sv.degree);
    }
    DegenerateGenome child(species, std::move(chosen));
    if (!is_genome(child) || !is_derived(child, parent)) fail("degree", species + " does not decode to a derived genome");
    rec.beta_term -= opt.beta * static_cast<double>(child.telomere_count() * sv.degree);
    rec.genomes.emplace(species, std::move(child));
  }

  double alpha_term = 0;
  for (std::size_t k = 0; k < built.diagrams.size(); ++k) {
    const auto& d = built.diagrams[k];
    const auto& dv = built.diagram_vars[k];
    std::vector<char> selected(d.edges.size());
    for (std::size_t j = 0; j < d.edges.size(); ++j) selected[j] = on(result, dv.edge[j]);

    DistanceBreakdown row;
    row.a = d.a;
    row.b = d.b;
    row.n = d.n;
    std::vector<Component> comps;
    try {
      comps = components(d, selected);
    } catch (const DiagramError& e) {
      fail("degree", e.what());
    }
    for (std::size_t p = 0; p < d.nodes.size(); ++p) {
      if (d.nodes[p].is_telomere() && on(result, dv.presence[p])) ++row.telomeres;
    }
    if (row.telomeres % 4 != 0) fail("degree", "telomere count of edge " + d.a + "-" + d.b + " is not a multiple of 4");
    row.n_prime = row.n + row.telomeres / 4;
    for (const auto& c : comps) {
      if (!c.cycle) fail("degree", "edge " + d.a + "-" + d.b + " has a path through " + d.node_name(c.nodes.front()));
      const auto runs = count_runs(d, c);
      if (runs == 0) ++row.cycles;
      if (runs >= 2) row.transitions += runs;
      const bool crosses = std::any_of(c.edges.begin(), c.edges.end(), [&](std::size_t j) {
        return d.edges[j].type == EdgeType::extremity || d.edges[j].type == EdgeType::telomere_extremity;
      });
      if (!crosses) ++row.singletons;
    }
    row.distance = static_cast<long long>(row.n_prime) - static_cast<long long>(row.cycles) +
                   static_cast<long long>(row.transitions / 2) + static_cast<long long>(row.singletons);
    alpha_term += static_cast<double>(row.cycles) - static_cast<double>(row.transitions) / 2 -
                  static_cast<double>(row.singletons);

    std::set<std::pair<std::string, std::string>> pairs;
    for (std::size_t j = 0; j < d.edges.size(); ++j) {
      if (selected[j] && d.edges[j].type == EdgeType::extremity) {
        pairs.emplace(d.nodes[d.edges[j].u].ext.marker, d.nodes[d.edges[j].v].ext.marker);
      }
    }
    rec.matchings.emplace_back(pairs.begin(), pairs.end());
    rec.distances.push_back(std::move(row));
  }
  rec.objective = rec.weight_term + opt.alpha * alpha_term + rec.beta_term;
  rec.solver_objective = model.objective_value(result.values);
  return rec;
}

void write_distances(std::ostream& out, const std::vector<DistanceBreakdown>& rows) {
  out << "edge\tn_prime\tcycles\ttransitions\tsingletons\tdistance\n";
  for (const auto& r : rows) {
    out << r.a << '-' << r.b << '\t' << r.n_prime << '\t' << r.cycles << '\t' << r.transitions << '\t' << r.singletons
        << '\t' << r.distance << '\n';
  }
}

void write_distances(const std::string& path, const std::vector<DistanceBreakdown>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_distances(out, rows);
}

namespace {

std::set<std::string> keys(const DegenerateGenome& g) {
  std::set<std::string> out;
  for (const auto& a : g.adjacencies()) {
    if (a.first.is_telomere()) {
      out.insert("telomere:" + a.second.str());
    } else if (a.second.is_telomere()) {
      out.insert("telomere:" + a.first.str());
    } else {
      out.insert(a.first.str() + "~" + a.second.str());
    }
  }
  return out;
}

}  // namespace

Metrics evaluate(const GenomeMap& predicted, const GenomeMap& truth) {
  Metrics m;
  double psum = 0, rsum = 0;
  for (const auto& [node, g] : truth) {
    auto it = predicted.find(node);
    if (it == predicted.end()) throw Error("no prediction for node " + node);
    const auto want = keys(g);
    const auto got = keys(it->second);
    NodeMetrics nm;
    nm.node = node;
    for (const auto& k : got) (want.count(k) ? nm.tp : nm.fp)++;
    nm.fn = want.size() - nm.tp;
    nm.precision = got.empty() ? 1.0 : static_cast<double>(nm.tp) / static_cast<double>(got.size());
    nm.recall = want.empty() ? 1.0 : static_cast<double>(nm.tp) / static_cast<double>(want.size());
    psum += nm.precision;
    rsum += nm.recall;
    m.mean.tp += nm.tp;
    m.mean.fp += nm.fp;
    m.mean.fn += nm.fn;
    m.nodes.push_back(std::move(nm));
  }
  m.mean.node = "mean";
  if (!m.nodes.empty()) {
    m.mean.precision = psum / static_cast<double>(m.nodes.size());
    m.mean.recall = rsum / static_cast<double>(m.nodes.size());
  }
  return m;
}

void write_metrics(std::ostream& out, const Metrics& metrics) {
  out << "node\tprecision\trecall\ttp\tfp\tfn\n";
  auto row = [&](const NodeMetrics& n) {
    out << n.node << '\t' << format_number(n.precision) << '\t' << format_number(n.recall) << '\t' << n.tp << '\t'
        << n.fp << '\t' << n.fn << '\n';
  };
  for (const auto& n : metrics.nodes) row(n);
  row(metrics.mean);
}

void write_metrics(const std::string& path, const Metrics& metrics) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_metrics(out, metrics);
}

}  // namespace sppdcj
