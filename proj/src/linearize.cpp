#include "sppdcj/linearize.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>

namespace sppdcj {

const char* to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::even_cycle: return "even-cycle";
    case ComponentKind::even_path: return "even-path";
    case ComponentKind::even_clique: return "even-clique";
    case ComponentKind::needs_augmentation: return "needs-augmentation";
  }
  return "?";
}

std::vector<ComponentClass> classify_components(const DegenerateGenome& genome) {
  const auto exts = genome.extremities();
  const auto adjs = genome.adjacencies();
  std::vector<std::size_t> parent(exts.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& a : adjs) {
    auto u = root(*genome.find(a.first));
    auto v = root(*genome.find(a.second));
    if (u != v) parent[std::max(u, v)] = std::min(u, v);
  }

  std::vector<ComponentClass> out;
  std::vector<std::size_t> slot(exts.size(), SIZE_MAX);
  for (std::size_t v = 0; v < exts.size(); ++v) {
    auto r = root(v);
    if (slot[r] == SIZE_MAX) {
      slot[r] = out.size();
      out.emplace_back();
    }
    out[slot[r]].nodes.push_back(exts[v]);
  }
  for (std::size_t k = 0; k < adjs.size(); ++k) {
    out[slot[root(*genome.find(adjs[k].first))]].adjacencies.push_back(k);
  }

  for (auto& c : out) {
    const auto nv = c.nodes.size();
    const auto ne = c.adjacencies.size();
    if (nv % 2 != 0) continue;
    std::size_t max_degree = 0;
    bool all_two = true;
    for (const auto& e : c.nodes) {
      auto d = genome.incident(*genome.find(e)).size();
      max_degree = std::max(max_degree, d);
      all_two = all_two && d == 2;
    }
    if (all_two) {
      c.kind = ComponentKind::even_cycle;
    } else if (ne + 1 == nv && max_degree <= 2) {
      c.kind = ComponentKind::even_path;
    } else if (ne == nv * (nv - 1) / 2) {
      c.kind = ComponentKind::even_clique;
    }
  }
  return out;
}

namespace {

std::optional<long long> telomere_number(const std::string& marker) {
  if (marker.size() < 3 || marker.compare(0, 2, "t.") != 0) return std::nullopt;
  long long n = 0;
  auto [ptr, ec] = std::from_chars(marker.data() + 2, marker.data() + marker.size(), n);
  if (ec != std::errc{} || ptr != marker.data() + marker.size()) return std::nullopt;
  return n;
}

}  // namespace

DegenerateGenome augment(const DegenerateGenome& genome) {
  std::set<std::string> used_markers;
  long long next = 0;
  for (const auto& e : genome.extremities()) {
    used_markers.insert(e.marker);
    if (auto n = telomere_number(e.marker)) next = std::max(next, *n);
  }

  std::vector<Extremity> targets;
  for (const auto& c : classify_components(genome)) {
    if (c.exempt()) continue;
    for (const auto& e : c.nodes) {
      if (e.is_telomere()) continue;
      bool has_telomere = false;
      for (auto k : genome.incident(*genome.find(e))) {
        has_telomere = has_telomere || genome.adjacencies()[k].is_telomeric();
      }
      if (!has_telomere) targets.push_back(e);
    }
  }
  if (targets.empty()) return genome;
  std::sort(targets.begin(), targets.end());

  std::vector<Adjacency> adjs(genome.adjacencies().begin(), genome.adjacencies().end());
  for (const auto& e : targets) {
    std::string name;
    do {
      name = "t." + std::to_string(++next);
    } while (used_markers.contains(name));
    used_markers.insert(name);
    adjs.push_back(Adjacency::make(e, telomere(name), 0.0));
  }
  return DegenerateGenome(genome.species(), std::move(adjs));
}

namespace {

// Shared state of the exact-cover style searches below.
struct CoverSearch {
  const DegenerateGenome& g;
  std::vector<char> covered;  // per extremity
  std::vector<std::size_t> chosen;

  explicit CoverSearch(const DegenerateGenome& genome) : g(genome), covered(genome.extremities().size(), 0) {}

  bool usable(std::size_t k) const {
    const auto& a = g.adjacencies()[k];
    return !covered[*g.find(a.first)] && !covered[*g.find(a.second)];
  }
  void take(std::size_t k, char value) {
    const auto& a = g.adjacencies()[k];
    covered[*g.find(a.first)] = value;
    covered[*g.find(a.second)] = value;
  }
};

}  // namespace

std::optional<DegenerateGenome> find_derived_genome(const DegenerateGenome& genome, std::size_t max_steps) {
  CoverSearch s(genome);
  std::size_t steps = 0;

  // Components are independent, so each is solved on its own and failures
  // do not trigger backtracking into other components.
  for (const auto& comp : classify_components(genome)) {
    std::vector<std::size_t> members;
    for (const auto& e : comp.nodes) {
      if (!e.is_telomere()) members.push_back(*genome.find(e));
    }

    auto solve = [&](auto&& self) -> bool {
      if (++steps > max_steps) throw Error("linearizability search budget exhausted");
      std::size_t best = SIZE_MAX, best_count = SIZE_MAX;
      for (auto v : members) {
        if (s.covered[v]) continue;
        std::size_t count = 0;
        for (auto k : genome.incident(v)) count += s.usable(k);
        if (count < best_count) {
          best = v;
          best_count = count;
          if (count == 0) break;
        }
      }
      if (best == SIZE_MAX) return true;
      if (best_count == 0) return false;
      for (auto k : genome.incident(best)) {
        if (!s.usable(k)) continue;
        s.take(k, 1);
        s.chosen.push_back(k);
        if (self(self)) return true;
        s.chosen.pop_back();
        s.take(k, 0);
      }
      return false;
    };
    if (!solve(solve)) return std::nullopt;
  }
  std::sort(s.chosen.begin(), s.chosen.end());
  return select(genome, s.chosen);
}

std::vector<std::vector<std::size_t>> derived_genomes(const DegenerateGenome& genome, std::size_t limit) {
  CoverSearch s(genome);
  const auto exts = genome.extremities();
  std::vector<std::vector<std::size_t>> out;

  auto rec = [&](auto&& self) -> void {
    std::size_t v = 0;
    while (v < exts.size() && (s.covered[v] || exts[v].is_telomere())) ++v;
    if (v == exts.size()) {
      if (out.size() >= limit) throw Error("too many derived genomes");
      auto sel = s.chosen;
      std::sort(sel.begin(), sel.end());
      out.push_back(std::move(sel));
      return;
    }
    for (auto k : genome.incident(v)) {
      if (!s.usable(k)) continue;
      s.take(k, 1);
      s.chosen.push_back(k);
      self(self);
      s.chosen.pop_back();
      s.take(k, 0);
    }
  };
  rec(rec);
  std::sort(out.begin(), out.end());
  return out;
}

DegenerateGenome select(const DegenerateGenome& genome, const std::vector<std::size_t>& selection) {
  std::vector<Adjacency> adjs;
  adjs.reserve(selection.size());
  for (auto k : selection) {
    if (k >= genome.adjacencies().size()) throw GenomeError("adjacency index out of range");
    adjs.push_back(genome.adjacencies()[k]);
  }
  return DegenerateGenome(genome.species(), std::move(adjs));
}

}  // namespace sppdcj
