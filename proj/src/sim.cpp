#include "sppdcj/sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace sppdcj {

DegenerateGenome to_genome(const std::string& species, const CircularChromosome& chromosome) {
  std::vector<Adjacency> adjs;
  const auto n = chromosome.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = chromosome[i];
    const auto& y = chromosome[(i + 1) % n];
    auto right = x.forward ? head_of(x.name) : tail_of(x.name);
    auto left = y.forward ? tail_of(y.name) : head_of(y.name);
    adjs.push_back(Adjacency::make(std::move(right), std::move(left)));
  }
  return DegenerateGenome(species, std::move(adjs));
}

namespace {

std::map<std::string, std::string> parse_params(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ';')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error("bad event parameter '" + item + "'");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

std::size_t param(const std::map<std::string, std::string>& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) throw Error("event lacks parameter " + key);
  return std::stoull(it->second);
}

std::string family_of(const std::string& marker) { return marker.substr(0, marker.find('.')); }

}  // namespace

void apply_event(CircularChromosome& c, const SimEvent& event) {
  const auto p = parse_params(event.params);
  const auto start = param(p, "start");
  const auto length = param(p, "length");
  const auto n = c.size();
  if (start >= n || length == 0 || length > n) throw Error("event out of range on branch " + event.branch);
  std::rotate(c.begin(), c.begin() + static_cast<long>(start), c.end());
  const auto seg_end = c.begin() + static_cast<long>(length);
  if (event.type == "inversion") {
    std::reverse(c.begin(), seg_end);
    for (auto it = c.begin(); it != seg_end; ++it) it->forward = !it->forward;
  } else if (event.type == "transposition") {
    const auto insert = param(p, "insert");
    if (insert == 0 || insert >= n - length) throw Error("transposition target out of range on branch " + event.branch);
    CircularChromosome seg(c.begin(), seg_end);
    CircularChromosome rest(seg_end, c.end());
    rest.insert(rest.begin() + static_cast<long>(insert), seg.begin(), seg.end());
    c = std::move(rest);
  } else if (event.type == "duplication") {
    auto it = p.find("names");
    if (it == p.end()) throw Error("duplication lacks names");
    std::vector<std::string> names;
    std::istringstream in(it->second);
    std::string name;
    while (std::getline(in, name, ',')) names.push_back(name);
    if (names.size() != length) throw Error("duplication names do not match its length");
    CircularChromosome copy(c.begin(), seg_end);
    for (std::size_t i = 0; i < length; ++i) {
      if (family_of(copy[i].name) != family_of(names[i])) throw Error("duplicate " + names[i] + " changes family");
      copy[i].name = names[i];
    }
    c.insert(seg_end, copy.begin(), copy.end());
  } else if (event.type == "deletion") {
    if (length >= n) throw Error("extinct genome on branch " + event.branch);
    c.erase(c.begin(), seg_end);
  } else {
    throw Error("unknown event type " + event.type);
  }
}

Simulation evolve(const SimConfig& config) {
  Rng rng(config.seed);
  return evolve(config, rng);
}

Simulation evolve(const SimConfig& config, Rng& rng) {
  if (config.leaves < 2) throw Error("a simulated tree needs at least 2 leaves");
  if (config.root_markers == 0) throw Error("the root genome needs at least one marker");
  const auto& r = config.rates;
  if (r.inversion < 0 || r.transposition < 0 || r.duplication < 0 || r.deletion < 0 || config.scale < 0) {
    throw Error("event rates and scale must be nonnegative");
  }

  // Tree shape: split random leaves until there are enough.
  std::vector<std::vector<std::size_t>> children(1);
  std::vector<std::size_t> open{0};
  while (open.size() < config.leaves) {
    std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
    const auto k = pick(rng);
    const auto node = open[k];
    open.erase(open.begin() + static_cast<long>(k));
    for (int c = 0; c < 2; ++c) {
      children[node].push_back(children.size());
      open.push_back(children.size());
      children.emplace_back();
    }
  }
  Simulation sim;
  std::vector<std::string> names(children.size());
  std::vector<std::size_t> preorder;
  std::vector<std::size_t> stack{0};
  std::size_t internal = 0, leaf = 0;
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    preorder.push_back(v);
    if (children[v].empty()) {
      names[v] = "L" + std::to_string(++leaf);
      sim.leaves.push_back(names[v]);
    } else {
      names[v] = "A" + std::to_string(++internal);
      sim.ancestors.push_back(names[v]);
      for (auto it = children[v].rbegin(); it != children[v].rend(); ++it) stack.push_back(*it);
    }
  }
  std::vector<std::pair<std::string, std::string>> edges;
  for (auto v : preorder) {
    for (auto c : children[v]) {
      edges.emplace_back(names[v], names[c]);
      sim.parent[names[c]] = names[v];
    }
  }
  sim.tree = Phylogeny(edges);
  sim.root = names[0];

  CircularChromosome root;
  std::map<std::string, std::size_t> next_copy;
  for (std::size_t f = 1; f <= config.root_markers; ++f) {
    root.push_back({std::to_string(f) + ".1", true});
    next_copy[std::to_string(f)] = 2;
  }
  sim.chromosomes[sim.root] = root;

  const double total = r.inversion + r.transposition + r.duplication + r.deletion;
  const std::array<std::pair<const char*, double>, 4> types{{{"inversion", r.inversion},
                                                             {"transposition", r.transposition},
                                                             {"duplication", r.duplication},
                                                             {"deletion", r.deletion}}};
  const std::array<double, 4> extension{config.extensions.inversion, config.extensions.transposition,
                                        config.extensions.duplication, config.extensions.deletion};

  for (const auto& [from, to] : edges) {
    auto c = sim.chromosomes.at(from);
    const std::string branch = from + "-" + to;
    std::vector<std::size_t> todo;
    for (std::size_t t = 0; t < types.size(); ++t) {
      if (total <= 0 || types[t].second <= 0 || config.scale <= 0) continue;
      std::poisson_distribution<std::size_t> count(config.scale * types[t].second / total);
      for (auto k = count(rng); k > 0; --k) todo.push_back(t);
    }
    std::shuffle(todo.begin(), todo.end(), rng);
    for (auto t : todo) {
      const auto n = c.size();
      std::geometric_distribution<std::size_t> extra(1.0 - std::clamp(extension[t], 0.0, 0.999));
      auto length = std::min<std::size_t>(1 + extra(rng), n);
      const auto start = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
      SimEvent e{branch, types[t].first, "start=" + std::to_string(start) + ";length=" + std::to_string(length)};
      if (t == 1) {
        if (length + 2 > n) continue;  // nowhere to move the segment
        const auto insert = std::uniform_int_distribution<std::size_t>(1, n - length - 1)(rng);
        e.params += ";insert=" + std::to_string(insert);
      } else if (t == 2) {
        // Names of the copies follow the rotated segment.
        std::string list;
        for (std::size_t i = 0; i < length; ++i) {
          const auto fam = family_of(c[(start + i) % n].name);
          if (!list.empty()) list += ',';
          list += fam + "." + std::to_string(next_copy[fam]++);
        }
        e.params += ";names=" + list;
      }
      apply_event(c, e);
      sim.events.push_back(std::move(e));
    }
    sim.chromosomes[to] = std::move(c);
  }
  for (const auto& [node, c] : sim.chromosomes) sim.truth.emplace(node, to_genome(node, c));
  return sim;
}

namespace {

using Pair = std::pair<Extremity, Extremity>;

Pair key_of(const Extremity& a, const Extremity& b) { return a < b ? Pair{a, b} : Pair{b, a}; }

}  // namespace

DegenerateGenome add_noise(const DegenerateGenome& truth, const DegenerateGenome& reference, const NoiseConfig& config,
                           Rng& rng, std::vector<std::string>& log) {
  if (config.target_surfeit < 1) throw Error("target surfeit must be at least 1");
  if (config.adversarial < 0 || config.adversarial > 1) throw Error("adversarial fraction must lie in [0, 1]");
  const auto n = truth.non_telomeric_count();
  const auto target = static_cast<std::size_t>(std::llround(config.target_surfeit * static_cast<double>(n) / 2));
  const auto current = truth.adjacencies().size();
  if (target <= current) return truth;
  const auto add = target - current;
  auto adversarial = static_cast<std::size_t>(std::llround(config.adversarial * static_cast<double>(add)));

  std::set<Pair> present;
  for (const auto& a : truth.adjacencies()) present.insert(key_of(a.first, a.second));
  std::vector<Adjacency> adjs(truth.adjacencies().begin(), truth.adjacencies().end());
  std::vector<Extremity> exts;
  for (const auto& e : truth.extremities()) {
    if (!e.is_telomere()) exts.push_back(e);
  }

  std::size_t added = 0;
  if (adversarial > 0) {
    std::map<std::pair<std::string, ExtremityKind>, std::vector<Extremity>> by_family;
    for (const auto& e : exts) by_family[{family_of(e.marker), e.kind}].push_back(e);
    std::set<Pair> candidates;
    for (const auto& a : reference.adjacencies()) {
      if (a.is_telomeric()) continue;
      auto x = by_family.find({family_of(a.first.marker), a.first.kind});
      auto y = by_family.find({family_of(a.second.marker), a.second.kind});
      if (x == by_family.end() || y == by_family.end()) continue;
      for (const auto& u : x->second) {
        for (const auto& v : y->second) {
          if (u == v) continue;
          auto k = key_of(u, v);
          if (!present.count(k)) candidates.insert(k);
        }
      }
    }
    std::vector<Pair> pool(candidates.begin(), candidates.end());
    std::shuffle(pool.begin(), pool.end(), rng);
    if (pool.size() < adversarial) {
      log.push_back(truth.species() + ": " + std::to_string(adversarial - pool.size()) +
                    " adversarial adjacencies unavailable, sampled uniformly instead");
      adversarial = pool.size();
    }
    for (std::size_t i = 0; i < adversarial; ++i) {
      present.insert(pool[i]);
      adjs.push_back(Adjacency::make(pool[i].first, pool[i].second));
      ++added;
    }
  }

  const std::size_t possible = exts.size() * (exts.size() - 1) / 2;
  std::uniform_int_distribution<std::size_t> pick(0, exts.size() - 1);
  while (added < add) {
    if (present.size() >= possible) {
      log.push_back(truth.species() + ": every possible adjacency is present, stopped " + std::to_string(add - added) +
                    " short of the target");
      break;
    }
    const auto i = pick(rng), j = pick(rng);
    if (i == j) continue;
    auto k = key_of(exts[i], exts[j]);
    if (!present.insert(k).second) continue;
    adjs.push_back(Adjacency::make(k.first, k.second));
    ++added;
  }
  return DegenerateGenome(truth.species(), std::move(adjs));
}

GenomeMap noisy_ancestors(const Simulation& sim, const NoiseConfig& config, Rng& rng, std::vector<std::string>& log) {
  GenomeMap out;
  for (const auto& leaf : sim.leaves) out.emplace(leaf, sim.truth.at(leaf));
  for (const auto& node : sim.ancestors) {
    const DegenerateGenome* reference = nullptr;
    if (auto it = sim.parent.find(node); it != sim.parent.end()) {
      reference = &out.at(it->second);
    } else {
      for (const auto& [child, parent] : sim.parent) {
        if (parent == node) {
          reference = &sim.truth.at(child);
          break;
        }
      }
    }
    out.emplace(node, add_noise(sim.truth.at(node), *reference, config, rng, log));
  }
  return out;
}

std::map<std::string, FamilyId> lineage_families(const Simulation& sim) {
  std::set<std::string> names;
  for (const auto& [species, genome] : sim.truth) {
    for (auto& m : genome.markers()) names.insert(std::move(m));
  }
  std::map<std::string, FamilyId> out;
  FamilyId next = 1;
  for (const auto& m : names) out.emplace(m, next++);
  return out;
}

GenomeMap neighbour_projection(const Simulation& sim) {
  GenomeMap out;
  for (const auto& leaf : sim.leaves) out.emplace(leaf, sim.truth.at(leaf));
  std::map<std::string, std::vector<std::string>> neighbours;
  for (const auto& [a, b] : sim.tree.edges()) {
    neighbours[a].push_back(b);
    neighbours[b].push_back(a);
  }
  for (const auto& node : sim.ancestors) {
    const auto& truth = sim.truth.at(node);
    std::set<Pair> present;
    std::vector<Adjacency> adjs(truth.adjacencies().begin(), truth.adjacencies().end());
    for (const auto& a : adjs) present.insert(key_of(a.first, a.second));
    for (const auto& other : neighbours[node]) {
      for (const auto& a : sim.truth.at(other).adjacencies()) {
        if (!truth.find(a.first) || !truth.find(a.second)) continue;
        if (present.insert(key_of(a.first, a.second)).second) adjs.push_back(Adjacency::make(a.first, a.second));
      }
    }
    out.emplace(node, DegenerateGenome(node, std::move(adjs)));
  }
  return out;
}

void write_events(std::ostream& out, const std::vector<SimEvent>& events) {
  for (const auto& e : events) out << e.branch << '\t' << e.type << '\t' << e.params << '\n';
}

void write_events(const std::string& path, const std::vector<SimEvent>& events) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_events(out, events);
}

std::vector<SimEvent> read_events(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<SimEvent> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto cols = split_tabs(line);
    if (cols.size() != 3) throw ParseError(path, lineno, "expected 'branch<TAB>event<TAB>params'");
    out.push_back({cols[0], cols[1], cols[2]});
  }
  return out;
}

}  // namespace sppdcj
