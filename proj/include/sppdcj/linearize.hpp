#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sppdcj/genome.hpp"

namespace sppdcj {

enum class ComponentKind { even_cycle, even_path, even_clique, needs_augmentation };

const char* to_string(ComponentKind kind);

/// A connected component of the graph whose nodes are extremities and whose
/// edges are the adjacencies of a degenerate genome.
struct ComponentClass {
  std::vector<Extremity> nodes;  // sorted
  std::vector<std::size_t> adjacencies;
  ComponentKind kind = ComponentKind::needs_augmentation;

  bool exempt() const noexcept { return kind != ComponentKind::needs_augmentation; }
};

/// Components in order of their smallest extremity.
std::vector<ComponentClass> classify_components(const DegenerateGenome& genome);

/// Adds a zero-weight adjacency to a fresh telomere for every non-telomeric
/// extremity of a non-exempt component that has no telomeric adjacency yet.
DegenerateGenome augment(const DegenerateGenome& genome);

/// Searches for a derived genome by backtracking. Returns std::nullopt when
/// none exists; throws Error("linearizability search budget exhausted") if
/// `max_steps` is reached first.
std::optional<DegenerateGenome> find_derived_genome(const DegenerateGenome& genome,
                                                    std::size_t max_steps = 1'000'000);

/// Every derived genome, as sorted adjacency index sets. Stops with
/// Error("too many derived genomes") beyond `limit`.
std::vector<std::vector<std::size_t>> derived_genomes(const DegenerateGenome& genome,
                                                      std::size_t limit = 100'000);

/// Genome made of the adjacencies `selection` of `genome`.
DegenerateGenome select(const DegenerateGenome& genome, const std::vector<std::size_t>& selection);

}  // namespace sppdcj
