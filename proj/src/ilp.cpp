#include "sppdcj/ilp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <set>
#include <thread>

#include "sppdcj/linearize.hpp"

namespace sppdcj {

bool check_linearizable(const DegenerateGenome& genome, std::size_t budget) {
  for (const auto& c : classify_components(genome)) {
    if (c.exempt()) continue;
    std::vector<Adjacency> adjs;
    for (auto k : c.adjacencies) adjs.push_back(genome.adjacencies()[k]);
    DegenerateGenome part(genome.species(), std::move(adjs));
    std::optional<DegenerateGenome> found;
    try {
      found = find_derived_genome(part, budget);
    } catch (const GenomeError&) {
      throw;
    } catch (const Error&) {
      return false;
    }
    if (!found) {
      throw GenomeError("genome " + genome.species() + " is not linearizable: the component of " +
                        std::to_string(c.nodes.size()) + " extremities containing " + c.nodes.front().str() +
                        " has no derived genome (run linearize first)");
    }
  }
  return true;
}

std::map<std::string, std::string> idmap_header(const BuildOptions& o) {
  return {{"alpha", format_number(o.alpha)},
          {"beta", format_number(o.beta)},
          {"optional", o.optional_constraints ? "1" : "0"},
          {"capping", to_string(o.capping)},
          {"reduce", o.reduce_telomeres ? "1" : "0"},
          {"singleton_cap", std::to_string(o.singleton_cap)}};
}

BuildOptions options_from_header(const std::map<std::string, std::string>& header) {
  BuildOptions o;
  auto num = [&](const char* key, double& out) {
    auto it = header.find(key);
    if (it == header.end()) return;
    try {
      out = std::stod(it->second);
    } catch (const std::exception&) {
      throw Error(std::string("bad id map header value for ") + key);
    }
  };
  num("alpha", o.alpha);
  num("beta", o.beta);
  if (auto it = header.find("optional"); it != header.end()) o.optional_constraints = it->second == "1";
  if (auto it = header.find("capping"); it != header.end()) o.capping = parse_capping(it->second);
  if (auto it = header.find("reduce"); it != header.end()) o.reduce_telomeres = it->second == "1";
  if (auto it = header.find("singleton_cap"); it != header.end()) o.singleton_cap = std::stoull(it->second);
  return o;
}

namespace {

std::string ks(std::size_t k) { return std::to_string(k); }

std::vector<MultiRelationalDiagram> build_diagrams(const Phylogeny& tree, const GenomeMap& genomes,
                                                   const FamilyAssignment& families, const BuildOptions& options) {
  const auto& edges = tree.edges();
  std::vector<MultiRelationalDiagram> out(edges.size());
  std::vector<std::exception_ptr> errors(edges.size());
  DiagramOptions dopt;
  dopt.capping = options.capping;
  dopt.reduce_telomeres = options.reduce_telomeres;
  dopt.singleton_cap = options.singleton_cap;

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < edges.size(); k = next++) {
      try {
        out[k] = build_diagram(genomes.find(edges[k].first)->second, genomes.find(edges[k].second)->second, families,
                               dopt);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const auto jobs = std::max<std::size_t>(1, std::min(options.jobs, edges.size()));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace

BuiltModel build_model(const Phylogeny& tree, const GenomeMap& genomes, const FamilyAssignment& families,
                       const BuildOptions& options) {
  const double alpha = options.alpha, beta = options.beta;
  if (!(alpha >= 0) || !(beta >= 0) || alpha + beta > 1 + 1e-12) {
    throw ModelError("invalid mixture: need alpha >= 0, beta >= 0 and alpha + beta <= 1 (got alpha=" +
                     format_number(alpha) + ", beta=" + format_number(beta) + ")");
  }
  for (const auto& node : tree.nodes()) {
    if (genomes.find(node) == genomes.end()) throw ModelError("no adjacencies for tree node " + node);
  }

  BuiltModel built;
  built.options = options;
  std::set<std::string> tags;
  for (const auto& node : tree.nodes()) {
    const auto& g = genomes.find(node)->second;
    if (options.check_linearizable && !check_linearizable(g, options.linearize_budget)) {
      built.warnings.push_back("linearizability of " + node + " not decided within the search budget");
    }
    SpeciesVars sv;
    sv.species = node;
    sv.tag = sanitize_name(node);
    sv.degree = tree.degree(node);
    if (!tags.insert(sv.tag).second) throw ModelError("species names collide after sanitizing: " + sv.tag);
    built.species_vars.emplace(node, std::move(sv));
  }

  built.diagrams = build_diagrams(tree, genomes, families, options);
  auto& m = built.model;
  const double weight_scale = 1.0 - alpha - beta;

  // Shared variables, in tree node order: adjacencies, then presences.
  for (const auto& node : tree.nodes()) {
    auto& sv = built.species_vars.find(node)->second;
    const auto& g = genomes.find(node)->second;
    const double deg = static_cast<double>(tree.degree(node));
    auto adjs = g.adjacencies();
    for (std::size_t i = 0; i < adjs.size(); ++i) {
      auto v = m.add_binary("x_" + sv.tag + "_" + ks(i + 1), "adjacency",
                            node + " " + adjs[i].first.str() + " " + adjs[i].second.str() + " w=" +
                                format_number(adjs[i].weight));
      if (weight_scale * adjs[i].weight != 0.0) m.add_objective(v, weight_scale * adjs[i].weight * deg);
      sv.adjacency.push_back(v);
    }
  }
  for (const auto& node : tree.nodes()) {
    auto& sv = built.species_vars.find(node)->second;
    const auto& g = genomes.find(node)->second;
    const double deg = static_cast<double>(tree.degree(node));
    auto exts = g.extremities();
    for (std::size_t i = 0; i < exts.size(); ++i) {
      auto v = m.add_binary("o_" + sv.tag + "_" + ks(i + 1), "presence", node + " " + exts[i].str());
      if (exts[i].is_telomere() && beta != 0.0) m.add_objective(v, -beta * deg);
      sv.presence.push_back(v);
    }
  }

  // Per-diagram variables.
  for (std::size_t k = 0; k < built.diagrams.size(); ++k) {
    const auto& d = built.diagrams[k];
    const auto kk = ks(k + 1);
    const auto& va = built.species_vars.find(d.a)->second;
    const auto& vb = built.species_vars.find(d.b)->second;
    const std::string label = d.a + "-" + d.b;
    DiagramVars dv;
    dv.edge.assign(d.edges.size(), npos);
    dv.presence.assign(d.nodes.size(), npos);

    for (std::size_t p = 0; p < d.nodes.size(); ++p) {
      const auto& node = d.nodes[p];
      if (!node.cap) dv.presence[p] = (node.side == Side::A ? va : vb).presence[node.genome_pos];
    }
    for (std::size_t j = 0; j < d.edges.size(); ++j) {
      const auto& e = d.edges[j];
      if (e.type == EdgeType::adjacency) {
        dv.edge[j] = (e.side == Side::A ? va : vb).adjacency[e.adjacency];
      } else if (e.type != EdgeType::cap_adjacency) {
        dv.edge[j] = m.add_binary("xe_" + kk + "_" + ks(j + 1), "edge",
                                  label + " " + to_string(e.type) + " " + d.node_name(e.u) + " " + d.node_name(e.v));
      }
    }
    for (std::size_t j = 0; j < d.edges.size(); ++j) {
      const auto& e = d.edges[j];
      if (e.type != EdgeType::cap_adjacency) continue;
      dv.edge[j] = m.add_binary("xc_" + kk + "_" + ks(j + 1), "cap-adjacency",
                                label + " " + d.node_name(e.u) + " " + d.node_name(e.v));
      for (auto p : {e.u, e.v}) {
        dv.presence[p] = m.add_binary("oc_" + kk + "_" + ks(d.nodes[p].index), "cap-presence", label + " " + d.node_name(p));
      }
    }
    if (d.capping == Capping::complete && d.caps_a + d.caps_b > 0) {
      dv.cap_side = m.add_binary("u_" + kk, "cap-side", label + " 1 if caps are used on side " + d.a);
    }
    dv.cycle.assign(d.nodes.size(), npos);
    for (std::size_t p = 0; p < d.non_telomeric; ++p) {
      dv.cycle[p] = m.add_binary("z_" + kk + "_" + ks(d.nodes[p].index), "cycle", label + " " + d.node_name(p));
      if (alpha != 0.0) m.add_objective(dv.cycle[p], alpha);
    }
    for (std::size_t c = 0; c < d.singletons.size(); ++c) {
      auto v = m.add_binary("s_" + kk + "_" + ks(c + 1), "singleton",
                            label + " side " + d.species(d.singletons[c].side) + " with " +
                                ks(d.singletons[c].edges.size()) + " edges");
      if (alpha != 0.0) m.add_objective(v, -alpha);
      dv.singleton.push_back(v);
    }
    for (std::size_t j = 0; j < d.edges.size(); ++j) {
      auto v = m.add_binary("t_" + kk + "_" + ks(j + 1), "transition", label + " " + to_string(d.edges[j].type) + " " +
                                                                            d.node_name(d.edges[j].u) + " " +
                                                                            d.node_name(d.edges[j].v));
      if (alpha != 0.0) m.add_objective(v, -alpha / 2);
      dv.transition.push_back(v);
    }
    for (std::size_t p = 0; p < d.nodes.size(); ++p) {
      dv.run.push_back(m.add_binary("r_" + kk + "_" + ks(d.nodes[p].index), "run", label + " " + d.node_name(p)));
    }
    for (std::size_t p = 0; p < d.nodes.size(); ++p) {
      const auto i = static_cast<double>(d.nodes[p].index);
      dv.label.push_back(
          m.add_variable({"y_" + kk + "_" + ks(d.nodes[p].index), VarType::continuous, 0, i, "label",
                          label + " " + d.node_name(p)}));
    }
    built.diagram_vars.push_back(std::move(dv));
  }

  if (options.optional_constraints) {
    for (const auto& node : tree.nodes()) {
      auto& sv = built.species_vars.find(node)->second;
      const auto& g = genomes.find(node)->second;
      sv.chromosomes = m.add_variable({"a_" + sv.tag, VarType::integer, 0,
                                       std::floor(static_cast<double>(g.telomere_count()) / 2), "chromosomes",
                                       node + " linear chromosomes"});
    }
  }

  // Rows of each genome.
  for (const auto& node : tree.nodes()) {
    const auto& sv = built.species_vars.find(node)->second;
    const auto& g = genomes.find(node)->second;
    auto exts = g.extremities();
    for (std::size_t i = 0; i < exts.size(); ++i) {
      if (exts[i].is_telomere()) continue;
      m.add_constraint("gene_" + sv.tag + "_" + ks(i + 1), {{sv.presence[i], 1}}, Relation::eq, 1, "presence");
    }
    for (std::size_t i = 0; i < exts.size(); ++i) {
      std::vector<Term> terms;
      for (auto a : g.incident(i)) terms.push_back({sv.adjacency[a], 1});
      terms.push_back({sv.presence[i], -1});
      m.add_constraint("adj_" + sv.tag + "_" + ks(i + 1), std::move(terms), Relation::eq, 0, "degree");
    }
    if (sv.chromosomes != npos) {
      std::vector<Term> terms;
      for (std::size_t i = 0; i < exts.size(); ++i) {
        if (exts[i].is_telomere()) terms.push_back({sv.presence[i], 1});
      }
      terms.push_back({sv.chromosomes, -2});
      m.add_constraint("even_" + sv.tag, std::move(terms), Relation::eq, 0, "even-telomeres");
    }
  }

  // Rows of each diagram.
  for (std::size_t k = 0; k < built.diagrams.size(); ++k) {
    const auto& d = built.diagrams[k];
    const auto& dv = built.diagram_vars[k];
    const auto kk = ks(k + 1);
    auto idx = [&](std::size_t p) { return static_cast<double>(d.nodes[p].index); };

    for (std::size_t j = 0; j < d.edges.size(); ++j) {
      const auto& e = d.edges[j];
      if (e.type != EdgeType::cap_adjacency) continue;
      for (auto p : {e.u, e.v}) {
        m.add_constraint("cap_" + kk + "_" + ks(d.nodes[p].index), {{dv.edge[j], 1}, {dv.presence[p], -1}},
                         Relation::eq, 0, "degree");
      }
      if (dv.cap_side != npos) {
        if (e.side == Side::A) {
          m.add_constraint("capside_" + kk + "_" + ks(j + 1), {{dv.edge[j], 1}, {dv.cap_side, -1}}, Relation::le, 0,
                           "cap-side");
        } else {
          m.add_constraint("capside_" + kk + "_" + ks(j + 1), {{dv.edge[j], 1}, {dv.cap_side, 1}}, Relation::le, 1,
                           "cap-side");
        }
      }
    }

    for (std::size_t p = 0; p < d.nodes.size(); ++p) {
      std::vector<Term> terms;
      for (auto j : d.incidence[p]) {
        if (!d.edges[j].is_adjacency()) terms.push_back({dv.edge[j], 1});
      }
      terms.push_back({dv.presence[p], -1});
      m.add_constraint("match_" + kk + "_" + ks(d.nodes[p].index), std::move(terms), Relation::eq, 0, "degree");
    }

    for (std::size_t j = 0; j < d.edges.size(); ++j) {
      const auto& e = d.edges[j];
      if (e.type == EdgeType::extremity && e.sibling != npos && j < e.sibling) {
        m.add_constraint("sib_" + kk + "_" + ks(j + 1), {{dv.edge[j], 1}, {dv.edge[e.sibling], -1}}, Relation::eq, 0,
                         "sibling");
      }
    }

    for (std::size_t j = 0; j < d.edges.size(); ++j) {
      const auto& e = d.edges[j];
      // y_v + i(1 - x) >= y_u with i the index of u, and symmetrically.
      m.add_constraint("lab_" + kk + "_" + ks(j + 1) + "_a",
                       {{dv.label[e.v], 1}, {dv.label[e.u], -1}, {dv.edge[j], -idx(e.u)}}, Relation::ge, -idx(e.u),
                       "label");
      m.add_constraint("lab_" + kk + "_" + ks(j + 1) + "_b",
                       {{dv.label[e.u], 1}, {dv.label[e.v], -1}, {dv.edge[j], -idx(e.v)}}, Relation::ge, -idx(e.v),
                       "label");
    }
    for (std::size_t j = 0; j < d.edges.size(); ++j) {
      const auto& e = d.edges[j];
      if (e.type != EdgeType::indel) continue;
      m.add_constraint("del_" + kk + "_" + ks(j + 1) + "_a", {{dv.label[e.u], 1}, {dv.edge[j], idx(e.u)}},
                       Relation::le, idx(e.u), "indel-label");
      m.add_constraint("del_" + kk + "_" + ks(j + 1) + "_b", {{dv.label[e.v], 1}, {dv.edge[j], idx(e.v)}},
                       Relation::le, idx(e.v), "indel-label");
    }
    for (std::size_t p = 0; p < d.non_telomeric; ++p) {
      m.add_constraint("cyc_" + kk + "_" + ks(d.nodes[p].index), {{dv.cycle[p], idx(p)}, {dv.label[p], -1}},
                       Relation::le, 0, "cycle");
    }

    for (std::size_t j = 0; j < d.edges.size(); ++j) {
      const auto& e = d.edges[j];
      if (e.type != EdgeType::indel) continue;
      for (auto [p, end] : {std::pair{e.u, "_a"}, std::pair{e.v, "_b"}}) {
        if (e.side == Side::A) {
          m.add_constraint("run_" + kk + "_" + ks(j + 1) + end, {{dv.run[p], 1}, {dv.edge[j], 1}}, Relation::le, 1,
                           "run");
        } else {
          m.add_constraint("run_" + kk + "_" + ks(j + 1) + end, {{dv.run[p], 1}, {dv.edge[j], -1}}, Relation::ge, 0,
                           "run");
        }
      }
    }
    for (std::size_t j = 0; j < d.edges.size(); ++j) {
      const auto& e = d.edges[j];
      m.add_constraint("trans_" + kk + "_" + ks(j + 1) + "_a",
                       {{dv.run[e.v], 1}, {dv.run[e.u], -1}, {dv.edge[j], 1}, {dv.transition[j], -1}}, Relation::le,
                       1, "transition");
      m.add_constraint("trans_" + kk + "_" + ks(j + 1) + "_b",
                       {{dv.run[e.u], 1}, {dv.run[e.v], -1}, {dv.edge[j], 1}, {dv.transition[j], -1}}, Relation::le,
                       1, "transition");
    }
    for (std::size_t c = 0; c < d.singletons.size(); ++c) {
      std::vector<Term> terms;
      for (auto j : d.singletons[c].edges) terms.push_back({dv.edge[j], 1});
      terms.push_back({dv.singleton[c], -1});
      m.add_constraint("single_" + kk + "_" + ks(c + 1), std::move(terms), Relation::le,
                       static_cast<double>(d.singletons[c].edges.size()) - 1, "singleton");
    }

    if (options.optional_constraints) {
      for (std::size_t j = 0; j < d.edges.size(); ++j) {
        const auto& e = d.edges[j];
        if (e.is_adjacency() && e.side == Side::A) {
          std::set<std::size_t> indels;
          for (auto p : {e.u, e.v}) {
            for (auto f : d.incidence[p]) {
              if (d.edges[f].type == EdgeType::indel && d.edges[f].side == Side::A) indels.insert(f);
            }
          }
          std::vector<Term> terms;
          for (auto f : indels) terms.push_back({dv.edge[f], 1});
          terms.push_back({dv.transition[j], -1});
          m.add_constraint("tsup_" + kk + "_" + ks(j + 1), std::move(terms), Relation::ge, 0, "transition-support");
        } else if (!e.is_adjacency()) {
          m.add_constraint("tfix_" + kk + "_" + ks(j + 1), {{dv.transition[j], 1}}, Relation::eq, 0,
                           "transition-support");
        }
      }
    }
  }
  return built;
}

}  // namespace sppdcj
