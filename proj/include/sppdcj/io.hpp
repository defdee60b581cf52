#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sppdcj/genome.hpp"

namespace sppdcj {

/// Malformed input; carries the file name and 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::string file, std::size_t line, const std::string& message);

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

using GenomeMap = std::map<std::string, DegenerateGenome, std::less<>>;

/// Adjacency TSV: `species ext1 ext2 [weight]`, `#` comments.
GenomeMap parse_adjacencies(std::istream& in, const std::string& name = "<stream>");
GenomeMap read_adjacencies(const std::string& path);

/// Canonical order: species, then ext1, then ext2 (text comparison).
void write_adjacencies(std::ostream& out, const GenomeMap& genomes);
void write_adjacencies(const std::string& path, const GenomeMap& genomes);
std::string format_adjacencies(const GenomeMap& genomes);

Phylogeny parse_phylogeny(std::istream& in, const std::string& name = "<stream>");
Phylogeny read_phylogeny(const std::string& path);
void write_phylogeny(std::ostream& out, const Phylogeny& tree);

/// `marker family_int` per line. The result has the prefix rule disabled.
FamilyAssignment parse_family_map(std::istream& in, const std::string& name = "<stream>");
FamilyAssignment read_family_map(const std::string& path);
FamilyAssignment explicit_families(const std::map<std::string, FamilyId>& families);
void write_family_map(std::ostream& out, const std::map<std::string, FamilyId>& families);
void write_family_map(const std::string& path, const std::map<std::string, FamilyId>& families);

/// Shortest round-trip decimal text of a double.
std::string format_number(double value);

/// Splits on tabs; strips a trailing carriage return.
std::vector<std::string> split_tabs(const std::string& line);

}  // namespace sppdcj
