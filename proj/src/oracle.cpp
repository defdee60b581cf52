#include "sppdcj/oracle.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>

#include "sppdcj/linearize.hpp"

namespace sppdcj {
namespace {

// Indel side along a walk: 'A', 'B'.
using RunSeq = std::vector<char>;

void append_runs(RunSeq& seq, const RunSeq& part) {
  for (char c : part) {
    if (seq.empty() || seq.back() != c) seq.push_back(c);
  }
}

std::size_t runs_on_cycle(const RunSeq& seq) {
  if (seq.empty()) return 0;
  std::size_t runs = seq.size();
  if (runs > 1 && seq.front() == seq.back()) --runs;
  return runs;
}

long long lambda_of(std::size_t runs) { return runs == 0 ? 0 : static_cast<long long>((runs + 2) / 2); }

// Relational diagram of two genomes under a fixed resolved assignment, with
// capping telomeres; evaluates every perfect matching of telomeric ends.
class CappedEvaluator {
 public:
  CappedEvaluator(const DegenerateGenome& a, const DegenerateGenome& b, const MarkerMatching& matching,
                  std::size_t caps_a, std::size_t caps_b) {
    const auto na = a.extremities().size();
    const auto nb = b.extremities().size();
    const auto total = na + nb + caps_a + caps_b;
    edges_.resize(total);
    side_.assign(total, 'A');
    telomeric_.assign(total, 0);
    for (std::size_t i = 0; i < nb; ++i) side_[na + i] = 'B';
    for (std::size_t i = 0; i < caps_b; ++i) side_[na + nb + caps_a + i] = 'B';

    auto link = [&](std::size_t u, std::size_t v, char kind) {
      edges_[u].push_back(links_.size());
      edges_[v].push_back(links_.size());
      links_.push_back({u, v, kind});
    };
    auto add_genome = [&](const DegenerateGenome& g, std::size_t offset) {
      for (const auto& adj : g.adjacencies()) link(offset + *g.find(adj.first), offset + *g.find(adj.second), 'j');
      for (std::size_t i = 0; i < g.extremities().size(); ++i) telomeric_[offset + i] = g.extremities()[i].is_telomere();
    };
    add_genome(a, 0);
    add_genome(b, na);
    for (std::size_t i = 0; i + 1 < caps_a; i += 2) link(na + nb + i, na + nb + i + 1, 'j');
    for (std::size_t i = 0; i + 1 < caps_b; i += 2) link(na + nb + caps_a + i, na + nb + caps_a + i + 1, 'j');
    for (std::size_t i = 0; i < caps_a + caps_b; ++i) telomeric_[na + nb + i] = 1;

    std::map<std::string, std::string> partner_of_a, partner_of_b;
    for (const auto& [x, y] : matching) {
      partner_of_a[x] = y;
      partner_of_b[y] = x;
    }
    for (const auto& marker : a.markers()) {
      auto t = *a.find(tail_of(marker)), h = *a.find(head_of(marker));
      auto it = partner_of_a.find(marker);
      if (it == partner_of_a.end()) {
        link(t, h, 'A');
      } else {
        link(t, na + *b.find(tail_of(it->second)), 'x');
        link(h, na + *b.find(head_of(it->second)), 'x');
      }
    }
    for (const auto& marker : b.markers()) {
      if (!partner_of_b.contains(marker)) link(na + *b.find(tail_of(marker)), na + *b.find(head_of(marker)), 'B');
    }

    decompose();
  }

  // Best sum over all components of (1 - [no extremity edge] - lambda).
  long long best(std::size_t& evaluated) {
    best_ = std::numeric_limits<long long>::min();
    std::vector<std::size_t> match(ends_a_.size(), 0);
    std::vector<char> used(ends_b_.size(), 0);
    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (i == ends_a_.size()) {
        ++evaluated;
        best_ = std::max(best_, fixed_ + joined(match));
        return;
      }
      for (std::size_t j = 0; j < ends_b_.size(); ++j) {
        if (used[j]) continue;
        used[j] = 1;
        match[i] = j;
        self(self, i + 1);
        used[j] = 0;
      }
    };
    rec(rec, 0);
    return best_;
  }

 private:
  struct Link {
    std::size_t u, v;
    char kind;  // 'j' adjacency, 'x' extremity, 'A'/'B' indel
  };
  struct Path {
    std::size_t end0, end1;
    RunSeq runs;  // from end0 to end1
  };

  // Follows links from `start` leaving through link `first`; stops at a
  // degree-one node or when back at `start`.
  std::size_t walk(std::size_t start, std::size_t first, std::vector<char>& seen, RunSeq& runs, bool& has_ext) {
    std::size_t at = start, via = first;
    seen[at] = 1;
    while (true) {
      const auto& l = links_[via];
      has_ext = has_ext || l.kind == 'x';
      if (l.kind == 'A' || l.kind == 'B') append_runs(runs, RunSeq{l.kind});
      at = l.u == at ? l.v : l.u;
      seen[at] = 1;
      if (at == start || edges_[at].size() == 1) return at;
      via = edges_[at][0] == via ? edges_[at][1] : edges_[at][0];
    }
  }

  void decompose() {
    const auto total = edges_.size();
    std::vector<char> seen(total, 0);
    path_of_.assign(total, SIZE_MAX);
    for (std::size_t v = 0; v < total; ++v) {
      if (edges_[v].size() > 2) throw Error("oracle: node of degree above two");
    }
    for (std::size_t v = 0; v < total; ++v) {
      if (seen[v] || edges_[v].size() != 1) continue;
      Path p;
      bool has_ext = false;
      p.end0 = v;
      p.end1 = walk(v, edges_[v][0], seen, p.runs, has_ext);
      path_of_[p.end0] = paths_.size();
      path_of_[p.end1] = paths_.size();
      paths_.push_back(std::move(p));
    }
    for (std::size_t v = 0; v < total; ++v) {
      if (seen[v] || edges_[v].empty()) continue;
      RunSeq runs;
      bool has_ext = false;
      walk(v, edges_[v][0], seen, runs, has_ext);
      fixed_ += 1 - (has_ext ? 0 : 1) - lambda_of(runs_on_cycle(runs));
    }
    for (std::size_t v = 0; v < total; ++v) {
      if (!telomeric_[v]) continue;
      (side_[v] == 'A' ? ends_a_ : ends_b_).push_back(v);
    }
    if (ends_a_.size() != ends_b_.size()) throw Error("oracle: unbalanced telomere ends");
    partner_.assign(total, SIZE_MAX);
  }

  long long joined(const std::vector<std::size_t>& match) {
    for (std::size_t i = 0; i < ends_a_.size(); ++i) {
      partner_[ends_a_[i]] = ends_b_[match[i]];
      partner_[ends_b_[match[i]]] = ends_a_[i];
    }
    std::vector<char> done(paths_.size(), 0);
    long long sum = 0;
    for (std::size_t start = 0; start < paths_.size(); ++start) {
      if (done[start]) continue;
      RunSeq runs;
      std::size_t p = start;
      std::size_t enter = paths_[p].end0;
      while (true) {
        done[p] = 1;
        const auto& path = paths_[p];
        std::size_t leave;
        if (enter == path.end0) {
          append_runs(runs, path.runs);
          leave = path.end1;
        } else {
          RunSeq rev(path.runs.rbegin(), path.runs.rend());
          append_runs(runs, rev);
          leave = path.end0;
        }
        auto next_end = partner_[leave];
        auto q = path_of_[next_end];
        if (q == start && next_end == paths_[start].end0) break;
        p = q;
        enter = next_end;
      }
      // joined cycles always contain telomere extremity edges
      sum += 1 - lambda_of(runs_on_cycle(runs));
    }
    return sum;
  }

  std::vector<Link> links_;
  std::vector<std::vector<std::size_t>> edges_;
  std::vector<char> side_;
  std::vector<char> telomeric_;
  std::vector<Path> paths_;
  std::vector<std::size_t> path_of_;
  std::vector<std::size_t> ends_a_, ends_b_;
  std::vector<std::size_t> partner_;
  long long fixed_ = 0;
  long long best_ = 0;
};

// All resolved assignments: per family an injective matching of the copies
// on the scarcer side into the other side.
std::vector<MarkerMatching> resolved_assignments(const DegenerateGenome& a, const DegenerateGenome& b,
                                                 const FamilyAssignment& families) {
  std::map<FamilyId, std::pair<std::vector<std::string>, std::vector<std::string>>> groups;
  for (const auto& m : a.markers()) groups[families.of(m)].first.push_back(m);
  for (const auto& m : b.markers()) groups[families.of(m)].second.push_back(m);

  std::vector<MarkerMatching> out{{}};
  for (const auto& [f, g] : groups) {
    const bool a_small = g.first.size() <= g.second.size();
    const auto& small = a_small ? g.first : g.second;
    const auto& large = a_small ? g.second : g.first;
    std::vector<MarkerMatching> options;
    std::vector<char> used(large.size(), 0);
    MarkerMatching cur;
    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (i == small.size()) {
        options.push_back(cur);
        return;
      }
      for (std::size_t j = 0; j < large.size(); ++j) {
        if (used[j]) continue;
        used[j] = 1;
        cur.emplace_back(a_small ? small[i] : large[j], a_small ? large[j] : small[i]);
        self(self, i + 1);
        cur.pop_back();
        used[j] = 0;
      }
    };
    rec(rec, 0);
    std::vector<MarkerMatching> next;
    for (const auto& base : out) {
      for (const auto& opt : options) {
        auto m = base;
        m.insert(m.end(), opt.begin(), opt.end());
        next.push_back(std::move(m));
      }
    }
    out = std::move(next);
  }
  for (auto& m : out) std::sort(m.begin(), m.end());
  return out;
}

std::size_t shared_markers(const DegenerateGenome& a, const DegenerateGenome& b, const FamilyAssignment& families) {
  std::map<FamilyId, std::pair<std::size_t, std::size_t>> counts;
  for (const auto& m : a.markers()) counts[families.of(m)].first++;
  for (const auto& m : b.markers()) counts[families.of(m)].second++;
  std::size_t n = 0;
  for (const auto& [f, c] : counts) n += std::min(c.first, c.second);
  return n;
}

double weight_of(const DegenerateGenome& g) {
  double w = 0;
  for (const auto& adj : g.adjacencies()) w += adj.weight;
  return w;
}

// Caps needed for telomere counts p, q; nullopt if the capping mode cannot
// realise them.
std::optional<std::pair<std::size_t, std::size_t>> caps_for(std::size_t p, std::size_t q, std::size_t ta,
                                                            std::size_t tb, Capping capping) {
  std::size_t ca = q > p ? q - p : 0;
  std::size_t cb = p > q ? p - q : 0;
  if (capping == Capping::deficient) {
    const long long l = static_cast<long long>(tb) - static_cast<long long>(ta);
    const std::size_t avail_a = l > 0 ? static_cast<std::size_t>(2 * (l / 2)) : 0;
    const std::size_t avail_b = l < 0 ? static_cast<std::size_t>(2 * (-l / 2)) : 0;
    if (ca > avail_a || cb > avail_b) return std::nullopt;
  }
  return std::pair{ca, cb};
}

struct PairBest {
  long long alpha_term = std::numeric_limits<long long>::min();
  MarkerMatching matching;
  std::size_t caps = 0;
};

std::optional<PairBest> best_pair(const DegenerateGenome& a, const DegenerateGenome& b, std::size_t ta,
                                  std::size_t tb, const FamilyAssignment& families, Capping capping,
                                  std::size_t& evaluated) {
  auto caps = caps_for(a.telomere_count(), b.telomere_count(), ta, tb, capping);
  if (!caps) return std::nullopt;
  PairBest best;
  best.caps = caps->first + caps->second;
  for (const auto& m : resolved_assignments(a, b, families)) {
    CappedEvaluator ev(a, b, m, caps->first, caps->second);
    auto v = ev.best(evaluated);
    if (v > best.alpha_term) {
      best.alpha_term = v;
      best.matching = m;
    }
  }
  return best;
}

std::vector<DegenerateGenome> all_derived(const DegenerateGenome& g) {
  std::vector<DegenerateGenome> out;
  for (const auto& sel : derived_genomes(g)) out.push_back(select(g, sel));
  return out;
}

}  // namespace

OracleResult brute_force_distance(const DegenerateGenome& a, const DegenerateGenome& b,
                                  const FamilyAssignment& families, const OracleOptions& options) {
  const auto size = a.extremities().size() + b.extremities().size();
  if (size > options.bound) {
    throw ScaleError("oracle scale: " + std::to_string(size) + " extremities exceed bound " +
                     std::to_string(options.bound));
  }
  const double wx = 1.0 - options.alpha - options.beta;
  const auto n = shared_markers(a, b, families);
  OracleResult result;
  bool found = false;
  const auto da = all_derived(a);
  const auto db = all_derived(b);
  for (const auto& ga : da) {
    for (const auto& gb : db) {
      auto best = best_pair(ga, gb, a.telomere_count(), b.telomere_count(), families, options.capping, result.evaluated);
      if (!best) continue;
      const auto telomeres = ga.telomere_count() + gb.telomere_count();
      const double value = wx * (weight_of(ga) + weight_of(gb)) +
                           options.alpha * static_cast<double>(best->alpha_term) -
                           options.beta * static_cast<double>(telomeres);
      if (!found || value > result.value + 1e-12) {
        found = true;
        result.value = value;
        result.alpha_term = static_cast<double>(best->alpha_term);
        const auto n_prime = n + (telomeres + best->caps) / 4;
        result.distance = static_cast<std::size_t>(static_cast<long long>(n_prime) - best->alpha_term);
        result.a = ga;
        result.b = gb;
        result.matching = best->matching;
      }
    }
  }
  if (!found) throw Error("oracle: no feasible derived pair");
  return result;
}

std::size_t brute_force_dcj_indel(const DegenerateGenome& a, const DegenerateGenome& b,
                                  const FamilyAssignment& families) {
  if (!is_genome(a) || !is_genome(b)) throw Error("oracle: distance needs two genomes");
  std::size_t evaluated = 0;
  auto best = best_pair(a, b, a.telomere_count(), b.telomere_count(), families, Capping::complete, evaluated);
  const auto telomeres = a.telomere_count() + b.telomere_count() + best->caps;
  const auto n_prime = shared_markers(a, b, families) + telomeres / 4;
  return static_cast<std::size_t>(static_cast<long long>(n_prime) - best->alpha_term);
}

SppOracleResult brute_force_spp(const Phylogeny& tree, const GenomeMap& genomes, const FamilyAssignment& families,
                                const OracleOptions& options, std::size_t max_combinations) {
  const auto& names = tree.nodes();
  std::vector<std::vector<DegenerateGenome>> choices;
  std::size_t combos = 1;
  std::size_t size = 0;
  for (const auto& name : names) {
    auto it = genomes.find(name);
    if (it == genomes.end()) throw Error("oracle: no genome for node " + name);
    size += it->second.extremities().size();
    choices.push_back(all_derived(it->second));
    combos *= choices.back().size();
    if (combos > max_combinations) throw ScaleError("oracle scale: too many derived genome combinations");
  }
  if (size > options.bound * names.size()) throw ScaleError("oracle scale: instance too large");

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = i;
  struct EdgeIdx {
    std::size_t u, v;
  };
  std::vector<EdgeIdx> edges;
  for (const auto& [x, y] : tree.edges()) edges.push_back({index[x], index[y]});

  const double wx = 1.0 - options.alpha - options.beta;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::optional<long long>> cache;
  std::size_t evaluated = 0;
  auto pair_value = [&](std::size_t e, std::size_t iu, std::size_t iv) -> std::optional<long long> {
    auto key = std::tuple{e, iu, iv};
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const auto& ed = edges[e];
    const auto& ga = genomes.find(names[ed.u])->second;
    const auto& gb = genomes.find(names[ed.v])->second;
    auto best = best_pair(choices[ed.u][iu], choices[ed.v][iv], ga.telomere_count(), gb.telomere_count(), families,
                          options.capping, evaluated);
    std::optional<long long> out;
    if (best) out = best->alpha_term;
    cache[key] = out;
    return out;
  };

  SppOracleResult result;
  bool found = false;
  std::vector<std::size_t> pick(names.size(), 0);
  std::vector<std::size_t> best_pick;
  while (true) {
    double value = 0;
    bool feasible = true;
    for (std::size_t i = 0; i < names.size() && feasible; ++i) {
      const auto& g = choices[i][pick[i]];
      const auto deg = static_cast<double>(tree.degree(names[i]));
      value += deg * (wx * weight_of(g) - options.beta * static_cast<double>(g.telomere_count()));
    }
    for (std::size_t e = 0; e < edges.size() && feasible; ++e) {
      auto v = pair_value(e, pick[edges[e].u], pick[edges[e].v]);
      if (!v) {
        feasible = false;
      } else {
        value += options.alpha * static_cast<double>(*v);
      }
    }
    if (feasible && (!found || value > result.value + 1e-12)) {
      found = true;
      result.value = value;
      best_pick = pick;
    }
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
    if (i == pick.size()) break;
  }
  if (!found) throw Error("oracle: no feasible combination");
  for (std::size_t i = 0; i < names.size(); ++i) result.derived.emplace(names[i], choices[i][best_pick[i]]);
  return result;
}

}  // namespace sppdcj
