#include <doctest.h>

#include "helpers.hpp"
#include "sppdcj/linearize.hpp"

using namespace sppdcj;
using testing::genome;

namespace {

// Subset enumeration: number of adjacency subsets forming a derived genome.
std::size_t count_derived(const DegenerateGenome& g) {
  const auto adj = g.adjacencies();
  REQUIRE(adj.size() <= 22);
  std::size_t count = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << adj.size()); ++mask) {
    std::map<Extremity, int> used;
    for (std::size_t i = 0; i < adj.size(); ++i) {
      if (mask >> i & 1) {
        ++used[adj[i].first];
        ++used[adj[i].second];
      }
    }
    bool ok = true;
    for (const auto& e : g.extremities()) {
      const int u = used.count(e) ? used[e] : 0;
      if (u > 1 || (!e.is_telomere() && u != 1)) ok = false;
    }
    count += ok;
  }
  return count;
}

// Random degenerate genome over `markers` markers with closure, plus up to
// `telomeres` telomeric adjacencies.
DegenerateGenome random_degenerate(std::size_t markers, std::size_t telomeres, std::size_t extra, std::mt19937_64& rng) {
  std::vector<Extremity> ext;
  for (std::size_t m = 1; m <= markers; ++m) {
    ext.push_back(tail_of(std::to_string(m)));
    ext.push_back(head_of(std::to_string(m)));
  }
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  // every extremity gets at least one partner
  for (std::size_t i = 0; i < ext.size(); ++i) {
    std::size_t j = rng() % ext.size();
    if (j == i) j = (i + 1) % ext.size();
    pairs.emplace(std::min(i, j), std::max(i, j));
  }
  for (std::size_t k = 0; k < extra; ++k) {
    std::size_t i = rng() % ext.size();
    std::size_t j = rng() % ext.size();
    if (i != j) pairs.emplace(std::min(i, j), std::max(i, j));
  }
  std::vector<Adjacency> adj;
  for (auto [i, j] : pairs) adj.push_back(Adjacency::make(ext[i], ext[j], 1));
  for (std::size_t t = 1; t <= telomeres; ++t) {
    adj.push_back(Adjacency::make(telomere("t." + std::to_string(t)), ext[rng() % ext.size()], 1));
  }
  return DegenerateGenome("R", adj);
}

DegenerateGenome clique(std::size_t markers) {
  std::vector<Extremity> ext;
  for (std::size_t m = 1; m <= markers; ++m) {
    ext.push_back(tail_of(std::to_string(m)));
    ext.push_back(head_of(std::to_string(m)));
  }
  std::vector<Adjacency> adj;
  for (std::size_t i = 0; i < ext.size(); ++i) {
    for (std::size_t j = i + 1; j < ext.size(); ++j) adj.push_back(Adjacency::make(ext[i], ext[j]));
  }
  return DegenerateGenome("K", adj);
}

// Path or cycle through the extremities of `markers` markers in a random order.
DegenerateGenome chain(std::size_t markers, bool cycle, std::mt19937_64& rng) {
  std::vector<Extremity> ext;
  for (std::size_t m = 1; m <= markers; ++m) {
    ext.push_back(tail_of(std::to_string(m)));
    ext.push_back(head_of(std::to_string(m)));
  }
  std::shuffle(ext.begin(), ext.end(), rng);
  std::vector<Adjacency> adj;
  for (std::size_t i = 0; i + 1 < ext.size(); ++i) adj.push_back(Adjacency::make(ext[i], ext[i + 1]));
  if (cycle && ext.size() > 2) adj.push_back(Adjacency::make(ext.back(), ext.front()));
  return DegenerateGenome("P", adj);
}

}  // namespace

TEST_CASE("classify components") {
  auto a = classify_components(genome("A", "1_t 2_t; 1_h 2_h"));
  REQUIRE(a.size() == 2);
  for (const auto& c : a) {
    CHECK(c.kind == ComponentKind::even_path);
    CHECK(c.exempt());
  }

  auto cyc = classify_components(genome("A", "1_t 2_t; 2_h 1_h; 1_t 1_h; 2_t 2_h"));
  REQUIRE(cyc.size() == 1);
  CHECK(cyc[0].kind == ComponentKind::even_cycle);

  auto path3 = classify_components(genome("X", "1_t 1_h; 1_h 2_t; 2_h t.1_o"));
  bool found = false;
  for (const auto& c : path3) {
    if (c.nodes.size() == 3) {
      CHECK(c.kind == ComponentKind::needs_augmentation);
      found = true;
    }
  }
  CHECK(found);

  auto k4 = classify_components(clique(2));
  REQUIRE(k4.size() == 1);
  CHECK(k4[0].kind == ComponentKind::even_clique);
  CHECK(k4[0].exempt());
}

TEST_CASE("exempt components are linearizable") {
  std::mt19937_64 rng(11);
  for (std::size_t m = 1; m <= 4; ++m) {
    auto k = clique(m);
    CHECK(classify_components(k).front().exempt());
    if (k.adjacencies().size() <= 22) CHECK(count_derived(k) > 0);
    for (int round = 0; round < 10; ++round) {
      for (bool cycle : {false, true}) {
        auto g = chain(m, cycle, rng);
        auto classes = classify_components(g);
        REQUIRE(classes.size() == 1);
        CHECK(classes[0].exempt());
        CHECK(count_derived(g) > 0);
      }
    }
  }
}

TEST_CASE("augment") {
  auto b = genome("B", "1_h 2_h; 1_h 3_h; 2_h 3_h; 1_t 2_t; 1_t 3_t; 2_t 3_t");
  CHECK(count_derived(b) == 0);
  auto aug = augment(b);
  CHECK(aug.adjacencies().size() == b.adjacencies().size() + 6);
  CHECK(aug.telomere_count() == 6);
  for (const auto& a : aug.adjacencies()) {
    if (a.is_telomeric()) CHECK(a.weight == 0);
  }
  CHECK(count_derived(aug) > 0);
  CHECK(find_derived_genome(aug).has_value());

  auto resolved = genome("A", "1_t 2_t; 2_h 1_h; 3_t 3_h");
  CHECK(testing::adjacency_set(augment(resolved)) == testing::adjacency_set(resolved));

  auto empty = DegenerateGenome("E", {});
  CHECK(augment(empty).empty());
}

TEST_CASE("fresh telomeres continue the existing numbering") {
  auto g = genome("X", "1_t 1_h; 1_h 2_t; 2_h t.4_o");
  auto aug = augment(g);
  std::set<std::string> telomeres;
  for (const auto& e : aug.extremities()) {
    if (e.is_telomere()) telomeres.insert(e.marker);
  }
  CHECK(telomeres.count("t.4"));
  CHECK(telomeres.count("t.5"));
}

TEST_CASE("augment is idempotent and yields linearizable genomes") {
  std::mt19937_64 rng(23);
  for (int round = 0; round < 60; ++round) {
    const std::size_t markers = 1 + rng() % 5;
    const std::size_t telomeres = rng() % 3;
    auto g = random_degenerate(markers, telomeres, rng() % 4, rng);
    auto aug = augment(g);
    CHECK(testing::adjacency_set(augment(aug)) == testing::adjacency_set(aug));
    for (const auto& a : g.adjacencies()) CHECK(aug.find_adjacency(a.first, a.second).has_value());
    if (aug.adjacencies().size() <= 22) CHECK(count_derived(aug) > 0);
    CHECK(find_derived_genome(aug).has_value());
  }
}

TEST_CASE("derived genome enumeration matches subset enumeration") {
  std::mt19937_64 rng(29);
  for (int round = 0; round < 60; ++round) {
    auto g = random_degenerate(1 + rng() % 4, rng() % 3, rng() % 5, rng);
    const auto derived = derived_genomes(g);
    CHECK(derived.size() == count_derived(g));
    for (const auto& sel : derived) CHECK(is_derived(select(g, sel), g));
    CHECK(find_derived_genome(g).has_value() == !derived.empty());
  }
}
