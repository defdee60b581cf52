#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sppdcj {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Genome content violates a structural invariant.
class GenomeError : public Error {
 public:
  using Error::Error;
};

enum class ExtremityKind : std::uint8_t { tail, head, telomere };

/// One end of a marker. Telomeres are single-extremity markers.
struct Extremity {
  std::string marker;
  ExtremityKind kind = ExtremityKind::tail;

  bool is_telomere() const noexcept { return kind == ExtremityKind::telomere; }

  /// Text form: `<marker>_t`, `<marker>_h` or `<marker>_o`.
  std::string str() const;
  static Extremity parse(std::string_view text);

  friend auto operator<=>(const Extremity&, const Extremity&) = default;
  friend bool operator==(const Extremity&, const Extremity&) = default;
};

Extremity tail_of(std::string marker);
Extremity head_of(std::string marker);
Extremity telomere(std::string marker);

/// Unordered pair of distinct extremities; stored with first < second.
struct Adjacency {
  Extremity first;
  Extremity second;
  double weight = 1.0;

  static Adjacency make(Extremity a, Extremity b, double weight = 1.0);

  bool has(const Extremity& e) const noexcept { return first == e || second == e; }
  const Extremity& other(const Extremity& e) const;
  bool is_telomeric() const noexcept { return first.is_telomere() || second.is_telomere(); }
  bool same_ends(const Adjacency& o) const noexcept { return first == o.first && second == o.second; }
};

/// A set of unique adjacencies of one species. Non-telomeric extremities may
/// take part in several adjacencies; every telomere takes part in at most one.
class DegenerateGenome {
 public:
  DegenerateGenome() = default;
  DegenerateGenome(std::string species, std::vector<Adjacency> adjacencies);

  const std::string& species() const noexcept { return species_; }
  std::span<const Adjacency> adjacencies() const noexcept { return adjacencies_; }
  /// Sorted, unique extremities occurring in any adjacency.
  std::span<const Extremity> extremities() const noexcept { return extremities_; }
  std::optional<std::size_t> find(const Extremity& e) const;
  /// Adjacency indices incident to extremity `index`.
  std::span<const std::size_t> incident(std::size_t index) const { return incidence_.at(index); }
  std::optional<std::size_t> find_adjacency(const Extremity& a, const Extremity& b) const;

  /// Sorted non-telomeric markers.
  std::vector<std::string> markers() const;
  std::size_t telomere_count() const noexcept { return telomeres_; }
  std::size_t non_telomeric_count() const noexcept { return extremities_.size() - telomeres_; }
  bool empty() const noexcept { return adjacencies_.empty(); }

  /// Every tail has its head and vice versa.
  bool has_closure() const;
  /// Throws GenomeError naming the first marker missing a partner extremity.
  void check_closure() const;

 private:
  std::string species_;
  std::vector<Adjacency> adjacencies_;
  std::vector<Extremity> extremities_;
  std::vector<std::vector<std::size_t>> incidence_;
  std::size_t telomeres_ = 0;
};

/// A genome uses every extremity exactly once. The alias documents intent; the
/// predicate `is_genome` is the check.
using Genome = DegenerateGenome;

using FamilyId = std::int64_t;

/// Maps non-telomeric markers to families. Explicit entries win; otherwise the
/// integer prefix before the first '.' of the marker name is used.
class FamilyAssignment {
 public:
  FamilyAssignment() = default;
  static FamilyAssignment explicit_only();

  void assign(std::string marker, FamilyId family);
  std::optional<FamilyId> find(std::string_view marker) const;
  /// Throws GenomeError("unassigned marker ...").
  FamilyId of(std::string_view marker) const;

 private:
  std::map<std::string, FamilyId, std::less<>> explicit_;
  bool prefix_rule_ = true;
};

/// Connected graph over species names; edges keep input order.
class Phylogeny {
 public:
  Phylogeny() = default;
  explicit Phylogeny(std::vector<std::pair<std::string, std::string>> edges);

  const std::vector<std::string>& nodes() const noexcept { return nodes_; }
  const std::vector<std::pair<std::string, std::string>>& edges() const noexcept { return edges_; }
  std::size_t degree(std::string_view node) const;
  std::vector<std::string> leaves() const;
  bool contains(std::string_view node) const;
  bool is_tree() const noexcept { return edges_.size() + 1 == nodes_.size(); }

 private:
  std::vector<std::string> nodes_;
  std::vector<std::pair<std::string, std::string>> edges_;
  std::map<std::string, std::size_t, std::less<>> degree_;
};

/// Number of extremities of `kind` whose marker belongs to `family`.
std::size_t multiplicity(const DegenerateGenome& genome, FamilyId family, ExtremityKind kind,
                         const FamilyAssignment& families);

/// 2|A| / |non-telomeric extremities|. Throws GenomeError("empty genome").
double surfeit(const DegenerateGenome& genome);

bool is_genome(const DegenerateGenome& genome);

/// `child` is a genome, a subset of `parent` and covers exactly the
/// non-telomeric extremities of `parent`.
bool is_derived(const DegenerateGenome& child, const DegenerateGenome& parent);

}  // namespace sppdcj
