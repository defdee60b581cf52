#include "sppdcj/diagram.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <tuple>

namespace sppdcj {

const char* to_string(Capping capping) { return capping == Capping::deficient ? "deficient" : "complete"; }

Capping parse_capping(std::string_view text) {
  if (text == "deficient") return Capping::deficient;
  if (text == "complete") return Capping::complete;
  throw Error("unknown capping mode '" + std::string(text) + "' (expected deficient or complete)");
}

const char* to_string(EdgeType type) {
  switch (type) {
    case EdgeType::adjacency: return "adjacency";
    case EdgeType::cap_adjacency: return "cap-adjacency";
    case EdgeType::extremity: return "extremity";
    case EdgeType::telomere_extremity: return "telomere-extremity";
    case EdgeType::indel: return "indel";
  }
  return "?";
}

std::size_t MultiRelationalDiagram::count(EdgeType type) const {
  return std::count_if(edges.begin(), edges.end(), [&](const DiagramEdge& e) { return e.type == type; });
}

std::size_t MultiRelationalDiagram::count(EdgeType type, Side side) const {
  return std::count_if(edges.begin(), edges.end(),
                       [&](const DiagramEdge& e) { return e.type == type && e.side == side; });
}

std::string MultiRelationalDiagram::node_name(std::size_t p) const {
  const auto& node = nodes.at(p);
  return species(node.side) + ":" + node.ext.str();
}

std::size_t indel_potential(std::size_t runs) { return runs == 0 ? 0 : (runs + 2) / 2; }

std::size_t count_runs(const std::vector<WalkStep>& walk, bool cycle) {
  std::vector<WalkStep> sides;
  for (auto s : walk) {
    if (s != WalkStep::other) sides.push_back(s);
  }
  if (sides.empty()) return 0;
  std::size_t runs = 1;
  for (std::size_t i = 1; i < sides.size(); ++i) runs += sides[i] != sides[i - 1];
  if (cycle && runs > 1 && sides.front() == sides.back()) --runs;
  return runs;
}

std::vector<Component> components(const MultiRelationalDiagram& d, const std::vector<char>& selected) {
  const auto nn = d.nodes.size();
  std::vector<std::vector<std::size_t>> inc(nn);
  for (std::size_t k = 0; k < d.edges.size(); ++k) {
    if (!selected[k]) continue;
    const auto& e = d.edges[k];
    inc[e.u].push_back(k);
    inc[e.v].push_back(k);
    if (inc[e.u].size() > 2 || inc[e.v].size() > 2) {
      auto bad = inc[e.u].size() > 2 ? e.u : e.v;
      throw DiagramError("component through " + d.node_name(bad) + " is not a path or cycle");
    }
  }

  std::vector<char> seen(nn, 0);
  std::vector<Component> out;
  auto walk = [&](std::size_t start, bool cycle) {
    Component c;
    c.cycle = cycle;
    std::size_t at = start;
    std::size_t came = npos;
    while (true) {
      seen[at] = 1;
      c.nodes.push_back(at);
      std::size_t next_edge = npos;
      for (auto k : inc[at]) {
        if (k != came) {
          next_edge = k;
          break;
        }
      }
      if (next_edge == npos) break;
      auto nxt = d.edges[next_edge].other(at);
      c.edges.push_back(next_edge);
      came = next_edge;
      if (nxt == start) break;
      at = nxt;
    }
    out.push_back(std::move(c));
  };
  for (std::size_t v = 0; v < nn; ++v) {
    if (!seen[v] && inc[v].size() == 1) walk(v, false);
  }
  for (std::size_t v = 0; v < nn; ++v) {
    if (!seen[v] && inc[v].size() == 2) walk(v, true);
  }
  return out;
}

std::size_t count_runs(const MultiRelationalDiagram& d, const Component& c) {
  std::vector<WalkStep> walk;
  walk.reserve(c.edges.size());
  for (auto k : c.edges) {
    const auto& e = d.edges[k];
    if (e.type != EdgeType::indel) {
      walk.push_back(WalkStep::other);
    } else {
      walk.push_back(e.side == Side::A ? WalkStep::indel_a : WalkStep::indel_b);
    }
  }
  return count_runs(walk, c.cycle);
}

namespace {

struct NodeKey {
  const std::string* species;
  const Extremity* ext;
  Side side;
  std::size_t genome_pos;
};

std::map<FamilyId, std::size_t> marker_counts(const DegenerateGenome& g, const FamilyAssignment& families) {
  std::map<FamilyId, std::pair<std::size_t, std::size_t>> kinds;
  for (const auto& e : g.extremities()) {
    if (e.is_telomere()) continue;
    auto& slot = kinds[families.of(e.marker)];
    (e.kind == ExtremityKind::tail ? slot.first : slot.second)++;
  }
  std::map<FamilyId, std::size_t> out;
  for (const auto& [f, c] : kinds) {
    if (c.first != c.second) {
      throw DiagramError("inconsistent family " + std::to_string(f) + " in " + g.species() + ": " +
                         std::to_string(c.first) + " tails, " + std::to_string(c.second) + " heads");
    }
    out[f] = c.first;
  }
  return out;
}

void rebuild_incidence(MultiRelationalDiagram& d) {
  d.incidence.assign(d.nodes.size(), {});
  for (std::size_t k = 0; k < d.edges.size(); ++k) {
    d.incidence[d.edges[k].u].push_back(k);
    d.incidence[d.edges[k].v].push_back(k);
  }
}

}  // namespace

MultiRelationalDiagram build_diagram(const DegenerateGenome& ga, const DegenerateGenome& gb,
                                     const FamilyAssignment& families, const DiagramOptions& options) {
  if (ga.species() == gb.species()) throw DiagramError("diagram of " + ga.species() + " with itself");
  MultiRelationalDiagram d;
  d.a = ga.species();
  d.b = gb.species();
  d.capping = options.capping;

  const auto count_a = marker_counts(ga, families);
  const auto count_b = marker_counts(gb, families);
  auto mult = [](const std::map<FamilyId, std::size_t>& m, FamilyId f) {
    auto it = m.find(f);
    return it == m.end() ? std::size_t{0} : it->second;
  };
  for (const auto& [f, ca] : count_a) d.n += std::min(ca, mult(count_b, f));

  // Nodes.
  std::vector<NodeKey> keys;
  auto collect = [&](const DegenerateGenome& g, Side side) {
    auto exts = g.extremities();
    for (std::size_t i = 0; i < exts.size(); ++i) keys.push_back({&g.species(), &exts[i], side, i});
  };
  collect(ga, Side::A);
  collect(gb, Side::B);
  std::stable_sort(keys.begin(), keys.end(), [](const NodeKey& x, const NodeKey& y) {
    bool tx = x.ext->is_telomere(), ty = y.ext->is_telomere();
    return std::tie(tx, *x.species, *x.ext) < std::tie(ty, *y.species, *y.ext);
  });
  std::vector<std::size_t> pos_a(ga.extremities().size()), pos_b(gb.extremities().size());
  for (const auto& k : keys) {
    DiagramNode node;
    node.side = k.side;
    node.ext = *k.ext;
    node.genome_pos = k.genome_pos;
    node.index = d.nodes.size() + 1;
    (k.side == Side::A ? pos_a : pos_b)[k.genome_pos] = d.nodes.size();
    if (!k.ext->is_telomere()) ++d.non_telomeric;
    d.nodes.push_back(std::move(node));
  }

  const long long ta = static_cast<long long>(ga.telomere_count());
  const long long tb = static_cast<long long>(gb.telomere_count());
  if (options.capping == Capping::deficient) {
    const long long l = tb - ta;
    d.caps_a = l > 0 ? static_cast<std::size_t>(2 * (l / 2)) : 0;
    d.caps_b = l < 0 ? static_cast<std::size_t>(2 * (-l / 2)) : 0;
  } else {
    d.caps_a = static_cast<std::size_t>(2 * (tb / 2));
    d.caps_b = static_cast<std::size_t>(2 * (ta / 2));
  }
  auto add_caps = [&](Side side, std::size_t count) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < count; ++i) {
      DiagramNode node;
      node.side = side;
      node.ext = telomere("c." + std::to_string(i + 1));
      node.cap = true;
      node.index = d.nodes.size() + 1;
      out.push_back(d.nodes.size());
      d.nodes.push_back(std::move(node));
    }
    return out;
  };
  const auto cap_nodes_a = add_caps(Side::A, d.caps_a);
  const auto cap_nodes_b = add_caps(Side::B, d.caps_b);

  // Adjacency edges.
  auto add_adjacencies = [&](const DegenerateGenome& g, Side side, const std::vector<std::size_t>& pos,
                             const std::vector<std::size_t>& caps) {
    auto adjs = g.adjacencies();
    for (std::size_t k = 0; k < adjs.size(); ++k) {
      DiagramEdge e;
      e.type = EdgeType::adjacency;
      e.side = side;
      e.u = pos[*g.find(adjs[k].first)];
      e.v = pos[*g.find(adjs[k].second)];
      e.adjacency = k;
      d.edges.push_back(e);
    }
    for (std::size_t i = 0; i + 1 < caps.size(); i += 2) {
      DiagramEdge e;
      e.type = EdgeType::cap_adjacency;
      e.side = side;
      e.u = caps[i];
      e.v = caps[i + 1];
      d.edges.push_back(e);
    }
  };
  add_adjacencies(ga, Side::A, pos_a, cap_nodes_a);
  add_adjacencies(gb, Side::B, pos_b, cap_nodes_b);

  // Marker extremity edges with sibling links.
  std::map<std::pair<FamilyId, ExtremityKind>, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> groups;
  for (std::size_t p = 0; p < d.non_telomeric; ++p) {
    const auto& node = d.nodes[p];
    auto& g = groups[{families.of(node.ext.marker), node.ext.kind}];
    (node.side == Side::A ? g.first : g.second).push_back(p);
  }
  std::vector<std::pair<std::size_t, std::size_t>> ext_pairs;
  for (const auto& [key, g] : groups) {
    for (auto u : g.first) {
      for (auto v : g.second) ext_pairs.emplace_back(u, v);
    }
  }
  std::sort(ext_pairs.begin(), ext_pairs.end());
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> by_markers;
  for (auto [u, v] : ext_pairs) {
    DiagramEdge e;
    e.type = EdgeType::extremity;
    e.side = Side::A;
    e.u = u;
    e.v = v;
    by_markers[{d.nodes[u].ext.marker, d.nodes[v].ext.marker}].push_back(d.edges.size());
    d.edges.push_back(e);
  }
  for (const auto& [markers, ks] : by_markers) {
    if (ks.size() != 2) throw DiagramError("marker pair " + markers.first + "/" + markers.second + " lacks a sibling");
    d.edges[ks[0]].sibling = ks[1];
    d.edges[ks[1]].sibling = ks[0];
  }

  // Telomere extremity edges, complete for now.
  std::vector<std::size_t> telo_a, telo_b;
  for (std::size_t p = d.non_telomeric; p < d.nodes.size(); ++p) {
    (d.nodes[p].side == Side::A ? telo_a : telo_b).push_back(p);
  }
  const auto telo_begin = d.edges.size();
  for (auto u : telo_a) {
    for (auto v : telo_b) {
      if (d.nodes[u].cap && d.nodes[v].cap) continue;
      DiagramEdge e;
      e.type = EdgeType::telomere_extremity;
      e.u = u;
      e.v = v;
      d.edges.push_back(e);
    }
  }
  const auto telo_end = d.edges.size();
  d.unreduced_telomere_edges = telo_end - telo_begin;

  // Indel edges of overrepresented families.
  auto add_indels = [&](Side side, const std::map<FamilyId, std::size_t>& own,
                        const std::map<FamilyId, std::size_t>& other) {
    std::map<std::string, std::pair<std::size_t, std::size_t>> ends;
    for (std::size_t p = 0; p < d.non_telomeric; ++p) {
      const auto& node = d.nodes[p];
      if (node.side != side) continue;
      auto f = families.of(node.ext.marker);
      if (mult(own, f) <= mult(other, f)) continue;
      auto& slot = ends[node.ext.marker];
      (node.ext.kind == ExtremityKind::tail ? slot.first : slot.second) = p;
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& [marker, tp] : ends) pairs.push_back(tp);
    std::sort(pairs.begin(), pairs.end());
    for (auto [t, h] : pairs) {
      DiagramEdge e;
      e.type = EdgeType::indel;
      e.side = side;
      e.u = t;
      e.v = h;
      d.edges.push_back(e);
    }
  };
  add_indels(Side::A, count_a, count_b);
  add_indels(Side::B, count_b, count_a);
  rebuild_incidence(d);

  d.telomere_classes = classify_telomeres(d);
  if (options.reduce_telomeres) {
    auto reduced = reduced_telomere_edges(d, d.telomere_classes);
    std::vector<DiagramEdge> edges(d.edges.begin(), d.edges.begin() + static_cast<long>(telo_begin));
    for (auto [u, v] : reduced) {
      DiagramEdge e;
      e.type = EdgeType::telomere_extremity;
      e.u = u;
      e.v = v;
      edges.push_back(e);
    }
    edges.insert(edges.end(), d.edges.begin() + static_cast<long>(telo_end), d.edges.end());
    d.edges = std::move(edges);
    d.reduced = true;
    rebuild_incidence(d);
  }

  d.singletons = enumerate_circular_singletons(d, options.singleton_cap);
  return d;
}

std::vector<CircularSingletonCandidate> enumerate_circular_singletons(const MultiRelationalDiagram& d,
                                                                      std::size_t cap) {
  std::vector<CircularSingletonCandidate> out;
  for (Side side : {Side::A, Side::B}) {
    // indel_of[node] = indel edge at that node on this side
    std::vector<std::size_t> indel_of(d.nodes.size(), npos);
    std::vector<std::size_t> order;  // indel edges in position order
    for (std::size_t k = 0; k < d.edges.size(); ++k) {
      const auto& e = d.edges[k];
      if (e.type != EdgeType::indel || e.side != side) continue;
      indel_of[e.u] = k;
      indel_of[e.v] = k;
      order.push_back(k);
    }
    std::vector<std::size_t> rank(d.edges.size(), npos);
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;

    std::vector<char> used(d.edges.size(), 0);
    std::vector<std::size_t> path;
    const auto first = out.size();
    for (std::size_t s = 0; s < order.size(); ++s) {
      const auto& start = d.edges[order[s]];
      const auto entry = start.u;  // tail
      path.assign(1, order[s]);
      used[order[s]] = 1;
      auto dfs = [&](auto&& self, std::size_t exit) -> void {
        for (auto k : d.incidence[exit]) {
          const auto& e = d.edges[k];
          if (e.type != EdgeType::adjacency || e.side != side) continue;
          auto f = e.other(exit);
          if (f == entry) {
            CircularSingletonCandidate c;
            c.side = side;
            c.edges = path;
            c.edges.push_back(k);
            std::sort(c.edges.begin(), c.edges.end());
            out.push_back(std::move(c));
            if (out.size() - first > cap) {
              throw DiagramError("singleton explosion on side " + d.species(side) + " of edge " + d.a + "-" + d.b +
                                 " (more than " + std::to_string(cap) + " candidates)");
            }
            continue;
          }
          auto m = indel_of[f];
          if (m == npos || used[m] || rank[m] <= s) continue;
          used[m] = 1;
          path.push_back(k);
          path.push_back(m);
          self(self, d.edges[m].other(f));
          path.pop_back();
          path.pop_back();
          used[m] = 0;
        }
      };
      dfs(dfs, start.v);
      used[order[s]] = 0;
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return std::tie(x.side, x.edges) < std::tie(y.side, y.edges);
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<TelomereClass> classify_telomeres(const MultiRelationalDiagram& d) {
  std::vector<TelomereClass> out;
  const auto nn = d.nodes.size();
  // state = node * 4 + expect_adjacency * 2 + through_indel
  std::vector<char> seen(nn * 4);
  std::vector<std::size_t> stack;
  for (std::size_t t = d.non_telomeric; t < nn; ++t) {
    if (d.nodes[t].cap) continue;
    std::fill(seen.begin(), seen.end(), 0);
    std::map<std::size_t, TelomerePartner> partners;
    auto push = [&](std::size_t node, int expect_adj, int indel) {
      auto s = node * 4 + static_cast<std::size_t>(expect_adj * 2 + indel);
      if (!seen[s]) {
        seen[s] = 1;
        stack.push_back(s);
      }
    };
    for (auto k : d.incidence[t]) {
      if (d.edges[k].type == EdgeType::adjacency) push(d.edges[k].other(t), 0, 0);
    }
    while (!stack.empty()) {
      auto s = stack.back();
      stack.pop_back();
      const auto node = s / 4;
      const int expect_adj = static_cast<int>((s / 2) % 2);
      const int indel = static_cast<int>(s % 2);
      for (auto k : d.incidence[node]) {
        const auto& e = d.edges[k];
        const auto w = e.other(node);
        if (expect_adj) {
          if (e.type != EdgeType::adjacency) continue;
          if (d.nodes[w].is_telomere()) {
            if (w == t) continue;
            auto& p = partners[w];
            p.node = w;
            (indel ? p.via_indel : p.indel_free) = true;
          } else {
            push(w, 0, indel);
          }
        } else if (e.type == EdgeType::extremity || e.type == EdgeType::indel) {
          push(w, 1, indel | (e.type == EdgeType::indel));
        }
      }
    }
    TelomereClass c;
    c.node = t;
    for (const auto& [w, p] : partners) c.partners.push_back(p);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> reduced_telomere_edges(const MultiRelationalDiagram& d,
                                                                        const std::vector<TelomereClass>& classes) {
  std::vector<char> all_vs_all(d.nodes.size(), 0);
  for (std::size_t p = d.non_telomeric; p < d.nodes.size(); ++p) all_vs_all[p] = d.nodes[p].cap;
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& c : classes) {
    const auto side = d.nodes[c.node].side;
    for (const auto& p : c.partners) {
      if (d.nodes[p.node].side == side || p.via_indel) all_vs_all[c.node] = 1;
      if (d.nodes[p.node].side != side && p.indel_free) {
        out.emplace_back(side == Side::A ? c.node : p.node, side == Side::A ? p.node : c.node);
      }
    }
  }
  for (std::size_t u = d.non_telomeric; u < d.nodes.size(); ++u) {
    if (!all_vs_all[u] || d.nodes[u].side != Side::A) continue;
    for (std::size_t v = d.non_telomeric; v < d.nodes.size(); ++v) {
      if (!all_vs_all[v] || d.nodes[v].side != Side::B) continue;
      if (d.nodes[u].cap && d.nodes[v].cap) continue;
      out.emplace_back(u, v);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void dump_diagram(std::ostream& out, const MultiRelationalDiagram& d) {
  for (const auto& e : d.edges) {
    out << to_string(e.type) << '\t' << d.node_name(e.u) << '\t' << d.node_name(e.v) << '\n';
  }
}

}  // namespace sppdcj
