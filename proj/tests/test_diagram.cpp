#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "sppdcj/diagram.hpp"

using namespace sppdcj;
using testing::genome;

namespace {

DiagramOptions unreduced() {
  DiagramOptions o;
  o.reduce_telomeres = false;
  return o;
}

// Every simple cycle of one side's adjacency and indel edges, kept if it
// alternates between the two edge types.
std::vector<std::vector<std::size_t>> naive_alternating_cycles(const MultiRelationalDiagram& d, Side side) {
  std::vector<std::size_t> edges;
  for (std::size_t k = 0; k < d.edges.size(); ++k) {
    const auto& e = d.edges[k];
    if (e.side == side && (e.type == EdgeType::adjacency || e.type == EdgeType::cap_adjacency || e.type == EdgeType::indel)) {
      edges.push_back(k);
    }
  }
  std::set<std::vector<std::size_t>> cycles;
  std::vector<std::size_t> path;
  std::vector<char> on_path(d.nodes.size(), 0);
  std::vector<char> edge_used(d.edges.size(), 0);
  auto is_indel = [&](std::size_t k) { return d.edges[k].type == EdgeType::indel; };
  auto walk = [&](auto&& self, std::size_t start, std::size_t node) -> void {
    for (auto k : edges) {
      const auto& e = d.edges[k];
      if (edge_used[k] || (e.u != node && e.v != node)) continue;
      const auto w = e.other(node);
      if (w < start) continue;
      path.push_back(k);
      edge_used[k] = 1;
      if (w == start) {
        bool alternating = path.size() % 2 == 0;
        for (std::size_t i = 0; alternating && i < path.size(); ++i) {
          alternating = is_indel(path[i]) != is_indel(path[(i + 1) % path.size()]);
        }
        if (alternating) {
          auto key = path;
          std::sort(key.begin(), key.end());
          cycles.insert(key);
        }
      } else if (!on_path[w]) {
        on_path[w] = 1;
        self(self, start, w);
        on_path[w] = 0;
      }
      edge_used[k] = 0;
      path.pop_back();
    }
  };
  for (std::size_t s = 0; s < d.nodes.size(); ++s) {
    on_path[s] = 1;
    walk(walk, s, s);
    on_path[s] = 0;
  }
  return {cycles.begin(), cycles.end()};
}

std::vector<std::vector<std::size_t>> enumerated(const MultiRelationalDiagram& d, Side side) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& c : d.singletons) {
    if (c.side == side) out.push_back(c.edges);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("indel potential") {
  CHECK(indel_potential(0) == 0);
  CHECK(indel_potential(1) == 1);
  CHECK(indel_potential(2) == 2);
  CHECK(indel_potential(3) == 2);
  CHECK(indel_potential(4) == 3);
  for (std::size_t l = 1; l < 50; ++l) CHECK(indel_potential(l) == (l + 2) / 2);
}

TEST_CASE("run counting") {
  using W = WalkStep;
  CHECK(count_runs({W::other, W::other}, true) == 0);
  CHECK(count_runs({W::indel_a, W::other, W::indel_b, W::other}, true) == 2);
  CHECK(count_runs({W::indel_a, W::other, W::indel_a, W::other}, true) == 1);
  CHECK(count_runs({W::indel_a, W::other, W::indel_b, W::other, W::indel_a}, true) == 2);
  CHECK(count_runs({W::indel_a, W::other, W::indel_b, W::other, W::indel_a}, false) == 3);
}

TEST_CASE("identical circular genomes") {
  auto a = genome("A", "1_t 2_t; 1_h 2_h");
  auto b = genome("B", "1_t 2_t; 1_h 2_h");
  auto d = build_diagram(a, b, FamilyAssignment{});
  CHECK(d.nodes.size() == 8);
  CHECK(d.count(EdgeType::extremity) == 4);
  CHECK(d.count(EdgeType::indel) == 0);
  CHECK(d.n == 2);
  CHECK(d.caps_a + d.caps_b == 0);
  CHECK(d.singletons.empty());
}

TEST_CASE("surplus copies become indel edges") {
  auto a = genome("A", "1.1_t 1.1_h; 1.2_t 1.2_h");
  auto b = genome("B", "1.1_t 1.1_h");
  auto d = build_diagram(a, b, FamilyAssignment{});
  CHECK(d.count(EdgeType::indel, Side::A) == 2);  // one per copy: either may be the surplus
  CHECK(d.count(EdgeType::indel, Side::B) == 0);
  CHECK(d.n == 1);
  CHECK(d.count(EdgeType::extremity) == 4);
}

TEST_CASE("capping from telomere imbalance") {
  auto a = genome("A", "1_t 2_t; 1_h 2_h");
  auto c = genome("C", "1_t 2_t; 1_h 2_h; 1_t 2_h; 1_h 2_t; t.1_o 2_t; t.2_o 1_h; t.3_o 2_h");
  auto d = build_diagram(a, c, FamilyAssignment{}, unreduced());
  // family-kind classes each hold one extremity per side
  CHECK(d.count(EdgeType::extremity) == 4);
  CHECK(d.caps_a == 2);
  CHECK(d.caps_b == 0);
  CHECK(d.count(EdgeType::cap_adjacency, Side::A) == 1);
  CHECK(d.count(EdgeType::telomere_extremity) == d.caps_a * 3);

  // complete bipartite per family and kind
  auto x = genome("X", "1.1_t 1.1_h; 1.2_t 1.2_h");
  auto y = genome("Y", "1.1_t 1.2_h; 1.2_t 1.1_h; 1.3_t 1.3_h");
  auto dxy = build_diagram(x, y, FamilyAssignment{});
  CHECK(dxy.count(EdgeType::extremity) == 2 * 3 * 2);

  auto complete = build_diagram(a, c, FamilyAssignment{}, DiagramOptions{Capping::complete, false});
  CHECK(complete.caps_a == 2);
  CHECK(complete.caps_b == 0);
}

TEST_CASE("node order and indices") {
  auto a = genome("A", "t.1_o 1_t; 1_h 2_t; 2_h t.2_o");
  auto b = genome("B", "1_t 1_h; 2_t 2_h");
  auto d = build_diagram(a, b, FamilyAssignment{});
  for (std::size_t p = 0; p < d.nodes.size(); ++p) CHECK(d.nodes[p].index == p + 1);
  for (std::size_t p = 0; p < d.non_telomeric; ++p) CHECK_FALSE(d.nodes[p].is_telomere());
  for (std::size_t p = d.non_telomeric; p < d.nodes.size(); ++p) CHECK(d.nodes[p].is_telomere());
  CHECK(d.caps_b == 2);
}

TEST_CASE("circular singleton candidates") {
  auto none = build_diagram(genome("A", "1_t 1_h"), genome("B", "1_t 1_h"), FamilyAssignment{});
  CHECK(none.singletons.empty());

  auto one = build_diagram(genome("A", "1_t 1_h; 2_t 2_h"), genome("B", "2_t 2_h"), FamilyAssignment{});
  CHECK(one.singletons.size() == 1);
  CHECK(one.singletons.front().edges.size() == 2);

  auto three = build_diagram(genome("A", "1_t 1_h; 2_t 2_h; 1_h 2_t; 2_h 1_t; 3_t 3_h"), genome("B", "3_t 3_h"),
                             FamilyAssignment{});
  CHECK(three.singletons.size() == 3);
}

TEST_CASE("singleton enumeration matches the naive cycle search") {
  std::mt19937_64 rng(31);
  int checked = 0;
  for (int round = 0; round < 80; ++round) {
    // A: random degenerate genome over 1..4, B keeps a random subset of markers
    const std::size_t markers = 2 + rng() % 3;
    std::vector<Extremity> ext;
    for (std::size_t m = 1; m <= markers; ++m) {
      ext.push_back(tail_of(std::to_string(m)));
      ext.push_back(head_of(std::to_string(m)));
    }
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < ext.size(); ++i) {
      auto j = rng() % ext.size();
      if (j != i) pairs.emplace(std::min<std::size_t>(i, j), std::max<std::size_t>(i, j));
    }
    for (std::size_t m = 0; m < markers; ++m) {
      if (rng() % 2) pairs.emplace(2 * m, 2 * m + 1);
    }
    std::vector<Adjacency> adj;
    for (auto [i, j] : pairs) adj.push_back(Adjacency::make(ext[i], ext[j]));
    DegenerateGenome a("A", adj);
    if (!a.has_closure()) continue;
    std::vector<Adjacency> badj;
    for (std::size_t m = 1; m <= markers; ++m) {
      if (rng() % 3 == 0) badj.push_back(Adjacency::make(tail_of(std::to_string(m)), head_of(std::to_string(m))));
    }
    badj.push_back(Adjacency::make(tail_of("9"), head_of("9")));
    DegenerateGenome b("B", badj);
    auto d = build_diagram(a, b, FamilyAssignment{});
    if (d.nodes.size() > 16) continue;
    for (Side side : {Side::A, Side::B}) CHECK(enumerated(d, side) == naive_alternating_cycles(d, side));
    ++checked;
  }
  CHECK(checked > 30);
}

TEST_CASE("telomere classification") {
  auto lin = genome("A", "t.1_o 1_t; 1_h 2_t; 2_h t.2_o");
  auto d = build_diagram(lin, genome("B", "t.1_o 1_t; 1_h 2_t; 2_h t.2_o"), FamilyAssignment{});
  CHECK(d.unreduced_telomere_edges == 4);
  CHECK(d.count(EdgeType::telomere_extremity) == 2);
  for (const auto& c : d.telomere_classes) {
    for (const auto& p : c.partners) {
      if (d.nodes[p.node].side != d.nodes[c.node].side) {
        CHECK(p.indel_free);
        CHECK_FALSE(p.via_indel);
      }
    }
  }

  auto blocked = build_diagram(genome("A", "t.1_o 1_t; 1_h t.2_o"), genome("B", "t.1_o 2_t; 2_h t.2_o"),
                               FamilyAssignment{});
  CHECK(blocked.count(EdgeType::telomere_extremity) == blocked.unreduced_telomere_edges);
  CHECK(blocked.unreduced_telomere_edges == 4);

  auto circ = build_diagram(genome("A", "1_t 1_h"), genome("B", "1_t 1_h"), FamilyAssignment{});
  CHECK(circ.telomere_classes.empty());
}

TEST_CASE("telomere partnership is symmetric") {
  std::mt19937_64 rng(37);
  for (int round = 0; round < 40; ++round) {
    auto a = testing::random_resolved_genome("A", 2 + rng() % 5, rng);
    auto b = testing::random_resolved_genome("B", 2 + rng() % 5, rng);
    auto d = build_diagram(a, b, FamilyAssignment{});
    std::map<std::pair<std::size_t, std::size_t>, std::pair<bool, bool>> rel;
    for (const auto& c : d.telomere_classes) {
      for (const auto& p : c.partners) {
        if (!d.nodes[p.node].cap) rel[{c.node, p.node}] = {p.indel_free, p.via_indel};
      }
    }
    for (const auto& [key, value] : rel) {
      auto it = rel.find({key.second, key.first});
      REQUIRE(it != rel.end());
      CHECK(it->second == value);
    }
  }
}

TEST_CASE("marker extremity edges join equal family and kind") {
  std::mt19937_64 rng(41);
  FamilyAssignment f;
  for (int round = 0; round < 30; ++round) {
    auto a = testing::random_resolved_genome("A", 1 + rng() % 6, rng);
    auto b = testing::random_resolved_genome("B", 1 + rng() % 6, rng);
    auto d = build_diagram(a, b, f);
    std::size_t expected = 0;
    for (FamilyId fam = 1; fam <= 6; ++fam) {
      for (auto kind : {ExtremityKind::tail, ExtremityKind::head}) {
        expected += multiplicity(a, fam, kind, f) * multiplicity(b, fam, kind, f);
      }
    }
    CHECK(d.count(EdgeType::extremity) == expected);
    for (const auto& e : d.edges) {
      if (e.type != EdgeType::extremity) continue;
      CHECK(d.nodes[e.u].ext.kind == d.nodes[e.v].ext.kind);
      CHECK(f.of(d.nodes[e.u].ext.marker) == f.of(d.nodes[e.v].ext.marker));
    }
    // telomere imbalance l fixes the caps
    const long l = static_cast<long>(b.telomere_count()) - static_cast<long>(a.telomere_count());
    CHECK(d.caps_a == static_cast<std::size_t>(std::max(0L, 2 * (l / 2))));
    CHECK(d.caps_b == static_cast<std::size_t>(std::max(0L, 2 * (-l / 2))));
  }
}
