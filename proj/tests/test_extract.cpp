#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "sppdcj/oracle.hpp"

using namespace sppdcj;

namespace {

// Cycles of the breakpoint graph of two circular genomes over the same
// single-copy markers: every extremity has one adjacency on each side.
std::size_t breakpoint_cycles(const DegenerateGenome& a, const DegenerateGenome& b) {
  std::map<std::string, std::string> pa, pb;
  for (const auto& x : a.adjacencies()) {
    pa[x.first.str()] = x.second.str();
    pa[x.second.str()] = x.first.str();
  }
  for (const auto& x : b.adjacencies()) {
    pb[x.first.str()] = x.second.str();
    pb[x.second.str()] = x.first.str();
  }
  std::set<std::string> seen;
  std::size_t cycles = 0;
  for (const auto& [start, _] : pa) {
    if (seen.count(start)) continue;
    ++cycles;
    std::string cur = start;
    do {
      seen.insert(cur);
      const auto next = pa.at(cur);
      seen.insert(next);
      cur = pb.at(next);
    } while (cur != start);
  }
  return cycles;
}

DegenerateGenome circular_genome(const std::string& species, std::size_t n, std::mt19937_64& rng) {
  return to_genome(species, testing::random_chromosome(n, rng));
}

std::vector<std::string> names_with_copies(std::mt19937_64& rng, std::size_t max_markers) {
  std::vector<std::string> names;
  for (std::size_t f = 1; f <= 3 && names.size() < max_markers; ++f) {
    const std::size_t copies = rng() % 3;
    for (std::size_t c = 1; c <= copies && names.size() < max_markers; ++c) {
      names.push_back(std::to_string(f) + "." + std::to_string(c));
    }
  }
  if (names.empty()) names.push_back("1.1");
  return names;
}

}  // namespace

TEST_CASE("identical genomes have distance zero") {
  std::mt19937_64 rng(89);
  for (int round = 0; round < 10; ++round) {
    auto a = testing::random_resolved_genome("A", 1 + rng() % 5, rng);
    auto b = DegenerateGenome("B", {a.adjacencies().begin(), a.adjacencies().end()});
    GenomeMap g{{"A", a}, {"B", b}};
    BuildOptions o;
    auto run = run_pipeline(testing::edge("A", "B"), g, FamilyAssignment{}, o, testing::internal_solver());
    REQUIRE(run.reconstruction.distances.size() == 1);
    CHECK(run.reconstruction.distances[0].distance == 0);
    CHECK(testing::adjacency_set(run.reconstruction.genomes.at("A")) == testing::adjacency_set(a));
    CHECK(testing::adjacency_set(run.reconstruction.genomes.at("B")) == testing::adjacency_set(b));
  }
}

TEST_CASE("circular genomes: distance is n minus breakpoint cycles") {
  std::mt19937_64 rng(97);
  for (int round = 0; round < 30; ++round) {
    const std::size_t n = 1 + rng() % 7;
    auto a = circular_genome("A", n, rng);
    auto b = circular_genome("B", n, rng);
    auto d = pairwise_distance(a, b, FamilyAssignment{}, testing::internal_solver());
    CHECK(d.distance == static_cast<long long>(n - breakpoint_cycles(a, b)));
    CHECK(d.n == n);
  }
}

TEST_CASE("pairwise distance matches exhaustive search") {
  std::mt19937_64 rng(101);
  for (int round = 0; round < 40; ++round) {
    auto a = testing::random_genome_over("A", names_with_copies(rng, 4), rng);
    auto b = testing::random_genome_over("B", names_with_copies(rng, 4), rng);
    auto d = pairwise_distance(a, b, FamilyAssignment{}, testing::internal_solver(), Capping::complete);
    CHECK(d.distance == static_cast<long long>(brute_force_dcj_indel(a, b, FamilyAssignment{})));
  }
}

TEST_CASE("distance breakdown identity and symmetry") {
  std::mt19937_64 rng(103);
  for (int round = 0; round < 20; ++round) {
    auto a = testing::random_genome_over("A", names_with_copies(rng, 5), rng);
    auto b = testing::random_genome_over("B", names_with_copies(rng, 5), rng);
    auto ab = pairwise_distance(a, b, FamilyAssignment{}, testing::internal_solver(), Capping::complete);
    auto ba = pairwise_distance(b, a, FamilyAssignment{}, testing::internal_solver(), Capping::complete);
    for (const auto& d : {ab, ba}) {
      CHECK(2 * d.distance == 2 * static_cast<long long>(d.n_prime) - 2 * static_cast<long long>(d.cycles) +
                                  static_cast<long long>(d.transitions) + 2 * static_cast<long long>(d.singletons));
      CHECK(d.transitions % 2 == 0);
    }
    CHECK(ab.distance == ba.distance);
  }
}

TEST_CASE("decoded objective equals the solver objective") {
  std::mt19937_64 rng(107);
  for (int round = 0; round < 20; ++round) {
    auto [a, b] = testing::random_degenerate_pair(rng, 4);
    GenomeMap g{{"A", a}, {"B", b}};
    BuildOptions o;
    o.capping = Capping::complete;
    auto run = run_pipeline(testing::edge("A", "B"), g, FamilyAssignment{}, o, testing::internal_solver());
    CHECK(run.reconstruction.objective == doctest::Approx(run.result.objective).epsilon(1e-9));
    CHECK(run.reconstruction.solver_objective == doctest::Approx(run.result.objective).epsilon(1e-9));
    for (const auto& [name, derived] : run.reconstruction.genomes) CHECK(is_derived(derived, g.at(name)));
  }
}

TEST_CASE("a surplus copy costs one indel") {
  auto g = testing::genomes("A 1.1_h 1.1_t;A 1.2_h 1.2_t;B 1.1_h 1.1_t");
  auto d = pairwise_distance(g.at("A"), g.at("B"), FamilyAssignment{}, testing::internal_solver());
  CHECK(d.n == 1);
  CHECK(d.distance == 1);
}

TEST_CASE("metrics") {
  auto truth = testing::genomes("X 1_h 2_t;X 2_h t.1_o;X 1_t t.2_o");
  {
    GenomeMap empty{{"X", DegenerateGenome("X", {})}};
    auto m = evaluate(empty, truth);
    CHECK(m.mean.precision == 1);
    CHECK(m.mean.recall == 0);
    CHECK(m.mean.fn == 3);
  }
  {
    auto m = evaluate(truth, truth);
    CHECK(m.mean.precision == 1);
    CHECK(m.mean.recall == 1);
    CHECK(m.mean.tp == 3);
  }
  {
    // telomeres are matched by their marker end only
    auto p = testing::genomes("X 1_h 2_t;X 2_h t.9_o;X 1_t 2_t");
    auto m = evaluate(p, truth);
    CHECK(m.mean.tp == 2);
    CHECK(m.mean.fp == 1);
    CHECK(m.mean.fn == 1);
    CHECK(m.mean.precision == doctest::Approx(2.0 / 3));
    CHECK(m.mean.recall == doctest::Approx(2.0 / 3));
  }
  std::ostringstream out;
  write_metrics(out, evaluate(truth, truth));
  CHECK(out.str().find("mean\t") != std::string::npos);
}
