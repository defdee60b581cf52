#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "helpers.hpp"
#include "sppdcj/solver.hpp"

using namespace sppdcj;

namespace {

IlpModel random_binary_model(std::mt19937_64& rng, std::size_t n) {
  IlpModel m;
  for (std::size_t i = 0; i < n; ++i) {
    m.add_binary("b" + std::to_string(i));
    m.add_objective(i, static_cast<double>(static_cast<int>(rng() % 11) - 5) / 2);
  }
  const std::size_t rows = 1 + rng() % 8;
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<Term> terms;
    for (std::size_t i = 0; i < n; ++i) {
      if (rng() % 3 == 0) terms.push_back({i, static_cast<double>(static_cast<int>(rng() % 7) - 3)});
    }
    std::erase_if(terms, [](const Term& t) { return t.coef == 0; });
    if (terms.empty()) terms.push_back({rng() % n, 1});
    const auto rel = static_cast<Relation>(rng() % 3);
    m.add_constraint("r" + std::to_string(r), terms, rel, static_cast<double>(static_cast<int>(rng() % 5) - 1),
                     "t");
  }
  return m;
}

// Best objective over all 0/1 assignments, NaN if none is feasible.
double enumerate(const IlpModel& m) {
  const auto n = m.variables().size();
  double best = std::nan("");
  std::vector<double> v(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(mask >> i & 1);
    if (m.max_violation(v) > 1e-9) continue;
    const double val = m.objective_value(v);
    if (std::isnan(best) || val > best) best = val;
  }
  return best;
}

}  // namespace

TEST_CASE("identical genomes reach the full alpha term") {
  auto g = testing::genomes("A 1_h 2_t;A 2_h 1_t;B 1_h 2_t;B 2_h 1_t");
  BuildOptions o;
  o.alpha = 1;
  o.beta = 0;
  auto built = build_model(testing::edge("A", "B"), g, FamilyAssignment{}, o);
  auto r = solve_internal(built.model);
  REQUIRE(r.status == SolveStatus::optimal);
  CHECK(r.objective == doctest::Approx(2));  // n' - d with d = 0
  CHECK(built.model.max_violation(r.values) <= 1e-9);
}

TEST_CASE("infeasible model") {
  IlpModel m;
  auto x = m.add_binary("x");
  auto y = m.add_binary("y");
  m.add_constraint("c", {{x, 1}, {y, 1}}, Relation::ge, 3, "t");
  auto r = solve_internal(m);
  CHECK(r.status == SolveStatus::infeasible);
  CHECK_FALSE(r.has_solution());
}

TEST_CASE("branch and bound matches enumeration") {
  std::mt19937_64 rng(67);
  for (int round = 0; round < 60; ++round) {
    const std::size_t n = 2 + rng() % 15;
    auto m = random_binary_model(rng, n);
    const double expected = enumerate(m);
    auto r = solve_internal(m);
    if (std::isnan(expected)) {
      CHECK(r.status == SolveStatus::infeasible);
    } else {
      REQUIRE(r.status == SolveStatus::optimal);
      CHECK(r.objective == doctest::Approx(expected));
      CHECK(m.max_violation(r.values) <= 1e-9);
      CHECK(m.objective_value(r.values) == doctest::Approx(r.objective));
    }
  }
}

TEST_CASE("enumeration limit on a 22 variable model") {
  std::mt19937_64 rng(71);
  auto m = random_binary_model(rng, 22);
  const double expected = enumerate(m);
  auto r = solve_internal(m);
  if (std::isnan(expected)) CHECK(r.status == SolveStatus::infeasible);
  else CHECK(r.objective == doctest::Approx(expected));
}

TEST_CASE("variable cap points to an external solver") {
  IlpModel m;
  for (int i = 0; i < 20; ++i) m.add_binary("b" + std::to_string(i));
  InternalBudget budget;
  budget.max_variables = 10;
  CHECK_THROWS_WITH_AS(solve_internal(m, budget), doctest::Contains("external"), SolverError);
}

TEST_CASE("solution file round trip") {
  std::mt19937_64 rng(73);
  auto m = random_binary_model(rng, 8);
  auto r = solve_internal(m);
  if (!r.has_solution()) return;
  std::ostringstream out;
  write_solution(out, m, r);
  std::istringstream in(out.str());
  auto file = parse_solution(in);
  CHECK(file.status == r.status);
  REQUIRE(file.objective.has_value());
  CHECK(*file.objective == doctest::Approx(r.objective));
  auto back = to_result(m, file);
  CHECK(back.values == r.values);
  CHECK(back.status == r.status);
}

TEST_CASE("solution errors") {
  IlpModel m;
  auto x = m.add_binary("x");
  auto y = m.add_binary("y");
  m.add_constraint("c", {{x, 1}, {y, 1}}, Relation::le, 1, "t");
  {
    std::istringstream in("# Status = optimal\nx 1\n");
    CHECK_THROWS_WITH_AS(to_result(m, parse_solution(in)), doctest::Contains("y"), SolverError);
  }
  {
    std::istringstream in("x 1\ny 1\n");
    CHECK_THROWS_AS(to_result(m, parse_solution(in)), SolverError);
  }
  {
    std::istringstream in("x one\n");
    CHECK_THROWS_AS(parse_solution(in), ParseError);
  }
  {
    std::istringstream in("x 0.9999999\ny 0\n");
    auto r = to_result(m, parse_solution(in));
    CHECK(r.values[x] == 1);
  }
}

TEST_CASE("internal and external solvers agree") {
  if (!testing::external_solver_available()) {
    MESSAGE("no external MILP solver available");
    return;
  }
  std::mt19937_64 rng(79);
  const auto dir = std::filesystem::temp_directory_path() / "sppdcj-solver-test";
  std::filesystem::create_directories(dir);
  ExternalOptions ext;
  ext.command = testing::solver_command();
  ext.time_limit = 120;
  for (int round = 0; round < 20; ++round) {
    auto [a, b] = testing::random_degenerate_pair(rng, 4);
    GenomeMap g{{"A", a}, {"B", b}};
    BuildOptions o;
    o.capping = Capping::complete;
    auto built = build_model(testing::edge("A", "B"), g, FamilyAssignment{}, o);
    auto in = solve_internal(built.model);
    const auto lp = (dir / "m.lp").string();
    write_lp(lp, built.model);
    auto ex = solve_external(built.model, lp, (dir / "m.sol").string(), ext);
    REQUIRE(in.status == SolveStatus::optimal);
    REQUIRE(ex.status == SolveStatus::optimal);
    CHECK(in.objective == doctest::Approx(ex.objective).epsilon(1e-9));
    CHECK(built.model.max_violation(ex.values) <= 1e-6);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("internal solver is deterministic") {
  std::mt19937_64 rng(83);
  for (int round = 0; round < 10; ++round) {
    auto [a, b] = testing::random_degenerate_pair(rng, 4);
    GenomeMap g{{"A", a}, {"B", b}};
    auto built = build_model(testing::edge("A", "B"), g, FamilyAssignment{}, {});
    auto first = solve_internal(built.model);
    auto second = solve_internal(built.model);
    CHECK(first.status == second.status);
    CHECK(first.values == second.values);
    CHECK(first.nodes == second.nodes);
  }
}

TEST_CASE("status names") {
  for (auto s : {SolveStatus::optimal, SolveStatus::feasible_bounded, SolveStatus::infeasible, SolveStatus::timeout}) {
    CHECK(parse_status(to_string(s)) == s);
  }
}
