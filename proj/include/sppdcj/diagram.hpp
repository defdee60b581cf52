#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sppdcj/genome.hpp"

namespace sppdcj {

class DiagramError : public Error {
 public:
  using Error::Error;
};

enum class Side : std::uint8_t { A, B };

/// How capping telomeres are added to a diagram.
///  deficient: 2*floor(l/2) caps on the side with fewer telomeres, l the difference.
///  complete:  enough caps on both sides for any telomere usage; a per-diagram
///             switch restricts cap use to one side.
enum class Capping : std::uint8_t { deficient, complete };

const char* to_string(Capping capping);
Capping parse_capping(std::string_view text);

enum class EdgeType : std::uint8_t { adjacency, cap_adjacency, extremity, telomere_extremity, indel };

const char* to_string(EdgeType type);

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

struct DiagramNode {
  Side side = Side::A;
  Extremity ext;               // caps use marker "c.<k>" and kind telomere
  bool cap = false;
  std::size_t index = 0;       // 1-based label index
  std::size_t genome_pos = npos;  // position in the genome's extremity list

  bool is_telomere() const noexcept { return ext.is_telomere(); }
};

struct DiagramEdge {
  EdgeType type = EdgeType::adjacency;
  Side side = Side::A;  // owning side of adjacency and indel edges; A for extremity edges
  std::size_t u = 0;    // node positions; extremity edges have u on side A, v on side B
  std::size_t v = 0;
  std::size_t adjacency = npos;  // index into the genome's adjacencies
  std::size_t sibling = npos;    // for marker extremity edges: the head/tail partner

  bool is_adjacency() const noexcept { return type == EdgeType::adjacency || type == EdgeType::cap_adjacency; }
  std::size_t other(std::size_t w) const noexcept { return w == u ? v : u; }
};

/// Alternating adjacency/indel cycle of one side; `edges` is the sorted
/// list of diagram edge positions, which doubles as the canonical key.
struct CircularSingletonCandidate {
  Side side = Side::A;
  std::vector<std::size_t> edges;

  friend bool operator==(const CircularSingletonCandidate&, const CircularSingletonCandidate&) = default;
};

struct TelomerePartner {
  std::size_t node = 0;
  bool indel_free = false;  // some alternating path without indel edges
  bool via_indel = false;   // some alternating path through an indel edge
};

struct TelomereClass {
  std::size_t node = 0;
  std::vector<TelomerePartner> partners;  // sorted by node
};

struct DiagramOptions {
  Capping capping = Capping::deficient;
  bool reduce_telomeres = true;
  std::size_t singleton_cap = 100'000;
};

/// Capped multi-relational diagram of one phylogeny edge.
struct MultiRelationalDiagram {
  std::string a;
  std::string b;
  Capping capping = Capping::deficient;
  bool reduced = false;

  /// Non-telomeric nodes first (sorted by species, marker, kind), then real
  /// telomeres, then caps of A, then caps of B. nodes[p].index == p + 1.
  std::vector<DiagramNode> nodes;
  /// Adjacencies of A, caps of A, adjacencies of B, caps of B, marker
  /// extremity edges, telomere extremity edges, indels of A, indels of B.
  std::vector<DiagramEdge> edges;
  std::vector<std::vector<std::size_t>> incidence;

  std::size_t non_telomeric = 0;
  std::size_t caps_a = 0;
  std::size_t caps_b = 0;
  std::size_t n = 0;  // markers kept on both sides
  std::size_t unreduced_telomere_edges = 0;

  std::vector<CircularSingletonCandidate> singletons;
  std::vector<TelomereClass> telomere_classes;

  std::size_t count(EdgeType type) const;
  std::size_t count(EdgeType type, Side side) const;
  const std::string& species(Side side) const { return side == Side::A ? a : b; }
  std::string node_name(std::size_t p) const;
};

std::size_t indel_potential(std::size_t runs);

/// Kind of an edge along a walk, for run counting.
enum class WalkStep : std::uint8_t { other, indel_a, indel_b };

/// Maximal same-side indel runs along a walk; on cycles the first and last
/// block merge when they belong to the same side.
std::size_t count_runs(const std::vector<WalkStep>& walk, bool cycle);

/// One connected component of a selection of diagram edges.
struct Component {
  std::vector<std::size_t> nodes;
  std::vector<std::size_t> edges;  // in walk order
  bool cycle = false;
};

/// Splits selected edges into components walked end to end. Throws
/// DiagramError if a component is not a path or cycle.
std::vector<Component> components(const MultiRelationalDiagram& d, const std::vector<char>& selected);

std::size_t count_runs(const MultiRelationalDiagram& d, const Component& c);

MultiRelationalDiagram build_diagram(const DegenerateGenome& a, const DegenerateGenome& b,
                                     const FamilyAssignment& families, const DiagramOptions& options = {});

/// Alternating adjacency/indel cycles on each side, each once. Throws
/// DiagramError("singleton explosion ...") beyond `cap` candidates.
std::vector<CircularSingletonCandidate> enumerate_circular_singletons(const MultiRelationalDiagram& d,
                                                                      std::size_t cap = 100'000);

/// Partners of every real telomere, found by searching alternating paths.
std::vector<TelomereClass> classify_telomeres(const MultiRelationalDiagram& d);

/// Telomere extremity edges after reduction, as (A node, B node) pairs.
std::vector<std::pair<std::size_t, std::size_t>> reduced_telomere_edges(
    const MultiRelationalDiagram& d, const std::vector<TelomereClass>& classes);

/// One line per edge: `type<TAB>u<TAB>v`.
void dump_diagram(std::ostream& out, const MultiRelationalDiagram& d);

}  // namespace sppdcj
