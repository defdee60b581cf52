#include "sppdcj/genome.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace sppdcj {

std::string Extremity::str() const {
  switch (kind) {
    case ExtremityKind::tail: return marker + "_t";
    case ExtremityKind::head: return marker + "_h";
    case ExtremityKind::telomere: return marker + "_o";
  }
  return marker;
}

Extremity Extremity::parse(std::string_view text) {
  if (text.size() < 3 || text[text.size() - 2] != '_') {
    throw GenomeError("malformed extremity '" + std::string(text) + "'");
  }
  std::string marker(text.substr(0, text.size() - 2));
  switch (text.back()) {
    case 't': return {std::move(marker), ExtremityKind::tail};
    case 'h': return {std::move(marker), ExtremityKind::head};
    case 'o': return {std::move(marker), ExtremityKind::telomere};
    default: throw GenomeError("malformed extremity '" + std::string(text) + "'");
  }
}

Extremity tail_of(std::string marker) { return {std::move(marker), ExtremityKind::tail}; }
Extremity head_of(std::string marker) { return {std::move(marker), ExtremityKind::head}; }
Extremity telomere(std::string marker) { return {std::move(marker), ExtremityKind::telomere}; }

Adjacency Adjacency::make(Extremity a, Extremity b, double weight) {
  if (a == b) throw GenomeError("adjacency joins extremity " + a.str() + " with itself");
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b), weight};
}

const Extremity& Adjacency::other(const Extremity& e) const {
  if (first == e) return second;
  if (second == e) return first;
  throw GenomeError("extremity " + e.str() + " not in adjacency");
}

DegenerateGenome::DegenerateGenome(std::string species, std::vector<Adjacency> adjacencies)
    : species_(std::move(species)), adjacencies_(std::move(adjacencies)) {
  std::sort(adjacencies_.begin(), adjacencies_.end(), [](const Adjacency& x, const Adjacency& y) {
    return std::tie(x.first, x.second) < std::tie(y.first, y.second);
  });
  for (std::size_t i = 1; i < adjacencies_.size(); ++i) {
    if (adjacencies_[i].same_ends(adjacencies_[i - 1])) {
      throw GenomeError("duplicate adjacency {" + adjacencies_[i].first.str() + ", " +
                        adjacencies_[i].second.str() + "} in " + species_);
    }
  }
  for (const auto& a : adjacencies_) {
    if (a.first.is_telomere() && a.second.is_telomere()) {
      throw GenomeError("adjacency between two telomeres {" + a.first.str() + ", " + a.second.str() +
                        "} in " + species_);
    }
    extremities_.push_back(a.first);
    extremities_.push_back(a.second);
  }
  std::sort(extremities_.begin(), extremities_.end());
  extremities_.erase(std::unique(extremities_.begin(), extremities_.end()), extremities_.end());

  incidence_.resize(extremities_.size());
  for (std::size_t i = 0; i < adjacencies_.size(); ++i) {
    incidence_[*find(adjacencies_[i].first)].push_back(i);
    incidence_[*find(adjacencies_[i].second)].push_back(i);
  }

  std::set<std::string_view> telomeric_markers;
  for (std::size_t i = 0; i < extremities_.size(); ++i) {
    const auto& e = extremities_[i];
    if (!e.is_telomere()) continue;
    ++telomeres_;
    telomeric_markers.insert(e.marker);
    if (incidence_[i].size() > 1) {
      throw GenomeError("telomere " + e.str() + " used in more than one adjacency in " + species_);
    }
  }
  for (const auto& e : extremities_) {
    if (!e.is_telomere() && telomeric_markers.contains(e.marker)) {
      throw GenomeError("marker " + e.marker + " used both as telomere and as gene in " + species_);
    }
  }
}

std::optional<std::size_t> DegenerateGenome::find(const Extremity& e) const {
  auto it = std::lower_bound(extremities_.begin(), extremities_.end(), e);
  if (it == extremities_.end() || *it != e) return std::nullopt;
  return static_cast<std::size_t>(it - extremities_.begin());
}

std::optional<std::size_t> DegenerateGenome::find_adjacency(const Extremity& a, const Extremity& b) const {
  auto ia = find(a);
  if (!ia) return std::nullopt;
  for (auto k : incidence_[*ia]) {
    if (adjacencies_[k].has(b) && !(a == b)) return k;
  }
  return std::nullopt;
}

std::vector<std::string> DegenerateGenome::markers() const {
  std::vector<std::string> out;
  for (const auto& e : extremities_) {
    if (!e.is_telomere() && (out.empty() || out.back() != e.marker)) out.push_back(e.marker);
  }
  return out;
}

bool DegenerateGenome::has_closure() const {
  for (const auto& e : extremities_) {
    if (e.is_telomere()) continue;
    auto partner = e;
    partner.kind = e.kind == ExtremityKind::tail ? ExtremityKind::head : ExtremityKind::tail;
    if (!find(partner)) return false;
  }
  return true;
}

void DegenerateGenome::check_closure() const {
  for (const auto& e : extremities_) {
    if (e.is_telomere()) continue;
    auto partner = e;
    partner.kind = e.kind == ExtremityKind::tail ? ExtremityKind::head : ExtremityKind::tail;
    if (!find(partner)) {
      throw GenomeError("marker " + e.marker + " of " + species_ + " lacks extremity " + partner.str());
    }
  }
}

FamilyAssignment FamilyAssignment::explicit_only() {
  FamilyAssignment f;
  f.prefix_rule_ = false;
  return f;
}

void FamilyAssignment::assign(std::string marker, FamilyId family) {
  explicit_[std::move(marker)] = family;
}

std::optional<FamilyId> FamilyAssignment::find(std::string_view marker) const {
  if (auto it = explicit_.find(marker); it != explicit_.end()) return it->second;
  if (!prefix_rule_) return std::nullopt;
  auto dot = marker.find('.');
  auto prefix = marker.substr(0, dot);
  FamilyId id = 0;
  auto [ptr, ec] = std::from_chars(prefix.data(), prefix.data() + prefix.size(), id);
  if (ec != std::errc{} || ptr != prefix.data() + prefix.size() || prefix.empty()) return std::nullopt;
  return id;
}

FamilyId FamilyAssignment::of(std::string_view marker) const {
  if (auto f = find(marker)) return *f;
  throw GenomeError("unassigned marker " + std::string(marker));
}

Phylogeny::Phylogeny(std::vector<std::pair<std::string, std::string>> edges) {
  std::set<std::pair<std::string, std::string>> seen;
  for (auto& [a, b] : edges) {
    if (a == b) throw GenomeError("phylogeny edge joins " + a + " with itself");
    auto key = a < b ? std::pair{a, b} : std::pair{b, a};
    if (!seen.insert(key).second) throw GenomeError("duplicate phylogeny edge " + a + " - " + b);
    ++degree_[a];
    ++degree_[b];
    edges_.emplace_back(std::move(a), std::move(b));
  }
  for (const auto& [node, _] : degree_) nodes_.push_back(node);

  if (nodes_.empty()) return;
  std::map<std::string_view, std::vector<std::string_view>> adj;
  for (const auto& [a, b] : edges_) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::set<std::string_view> reached{nodes_.front()};
  std::vector<std::string_view> stack{nodes_.front()};
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto w : adj[v]) {
      if (reached.insert(w).second) stack.push_back(w);
    }
  }
  if (reached.size() != nodes_.size()) throw GenomeError("phylogeny is not connected");
}

std::size_t Phylogeny::degree(std::string_view node) const {
  auto it = degree_.find(node);
  return it == degree_.end() ? 0 : it->second;
}

std::vector<std::string> Phylogeny::leaves() const {
  std::vector<std::string> out;
  for (const auto& [node, d] : degree_) {
    if (d == 1) out.push_back(node);
  }
  return out;
}

bool Phylogeny::contains(std::string_view node) const { return degree_.contains(node); }

std::size_t multiplicity(const DegenerateGenome& genome, FamilyId family, ExtremityKind kind,
                         const FamilyAssignment& families) {
  std::size_t count = 0;
  for (const auto& e : genome.extremities()) {
    if (e.is_telomere()) continue;
    auto f = families.of(e.marker);
    if (f == family && e.kind == kind) ++count;
  }
  return count;
}

double surfeit(const DegenerateGenome& genome) {
  if (genome.non_telomeric_count() == 0) throw GenomeError("empty genome");
  return 2.0 * static_cast<double>(genome.adjacencies().size()) /
         static_cast<double>(genome.non_telomeric_count());
}

bool is_genome(const DegenerateGenome& genome) {
  for (std::size_t i = 0; i < genome.extremities().size(); ++i) {
    if (genome.incident(i).size() != 1) return false;
  }
  return true;
}

bool is_derived(const DegenerateGenome& child, const DegenerateGenome& parent) {
  if (!is_genome(child)) return false;
  for (const auto& a : child.adjacencies()) {
    if (!parent.find_adjacency(a.first, a.second)) return false;
  }
  auto non_telomeric = [](const DegenerateGenome& g) {
    std::vector<Extremity> out;
    for (const auto& e : g.extremities()) {
      if (!e.is_telomere()) out.push_back(e);
    }
    return out;
  };
  return non_telomeric(child) == non_telomeric(parent);
}

}  // namespace sppdcj
