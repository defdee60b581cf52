#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sppdcj/linearize.hpp"
#include "sppdcj/oracle.hpp"
#include "sppdcj/pipeline.hpp"
#include "sppdcj/sim.hpp"
#include "sppdcj/version.hpp"

namespace py = pybind11;
using namespace sppdcj;

namespace {

GenomeMap genomes_from(const std::string& text) {
  std::istringstream in(text);
  return parse_adjacencies(in, "<adjacencies>");
}

Phylogeny tree_from(const std::string& text) {
  std::istringstream in(text);
  return parse_phylogeny(in, "<tree>");
}

FamilyAssignment families_from(const std::optional<std::string>& text) {
  if (!text) return FamilyAssignment{};
  std::istringstream in(*text);
  return parse_family_map(in, "<families>");
}

SolverChoice solver_from(const std::optional<std::string>& command, double time_limit) {
  SolverChoice s = command ? SolverChoice{} : default_solver();
  if (command) {
    s.internal = command->empty();
    s.command = *command;
  }
  s.time_limit = time_limit;
  return s;
}

py::dict distance_dict(const DistanceBreakdown& d) {
  py::dict out;
  out["a"] = d.a;
  out["b"] = d.b;
  out["n"] = d.n;
  out["n_prime"] = d.n_prime;
  out["telomeres"] = d.telomeres;
  out["cycles"] = d.cycles;
  out["transitions"] = d.transitions;
  out["singletons"] = d.singletons;
  out["distance"] = d.distance;
  return out;
}

py::dict metrics_dict(const NodeMetrics& m) {
  py::dict out;
  out["precision"] = m.precision;
  out["recall"] = m.recall;
  out["tp"] = m.tp;
  out["fp"] = m.fp;
  out["fn"] = m.fn;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Small parsimony under the DCJ-indel model: adjacency TSV text in, reconstructions out.";
  m.attr("__version__") = kVersion;

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", error);
  py::register_exception<GenomeError>(m, "GenomeError", error);
  py::register_exception<ModelError>(m, "ModelError", error);
  py::register_exception<SolverError>(m, "SolverError", error);

  m.def("indel_potential", &indel_potential, py::arg("runs"));

  m.def(
      "linearize",
      [](const std::string& adjacencies) {
        GenomeMap out;
        for (const auto& [name, g] : genomes_from(adjacencies)) out.emplace(name, augment(g));
        return format_adjacencies(out);
      },
      py::arg("adjacencies"), "Adds zero-weight telomeric adjacencies until every genome has a derived genome.");

  m.def(
      "build",
      [](const std::string& tree, const std::string& adjacencies, const std::optional<std::string>& families,
         double alpha, double beta, const std::string& capping) {
        BuildOptions o;
        o.alpha = alpha;
        o.beta = beta;
        o.capping = parse_capping(capping);
        auto built = build_model(tree_from(tree), genomes_from(adjacencies), families_from(families), o);
        std::ostringstream lp;
        write_lp(lp, built.model);
        return lp.str();
      },
      py::arg("tree"), py::arg("adjacencies"), py::arg("families") = py::none(), py::arg("alpha") = 0.5,
      py::arg("beta") = 0.25, py::arg("capping") = "deficient", "LP text of the integer program.");

  m.def(
      "run",
      [](const std::string& tree, const std::string& adjacencies, const std::optional<std::string>& families,
         double alpha, double beta, const std::string& capping, const std::optional<std::string>& solver,
         double time_limit) {
        BuildOptions o;
        o.alpha = alpha;
        o.beta = beta;
        o.capping = parse_capping(capping);
        const auto genomes = genomes_from(adjacencies);
        PipelineRun run;
        {
          py::gil_scoped_release release;
          run = run_pipeline(tree_from(tree), genomes, families_from(families), o, solver_from(solver, time_limit));
        }
        py::dict out;
        out["status"] = to_string(run.result.status);
        out["objective"] = run.result.objective;
        out["genomes"] = format_adjacencies(run.reconstruction.genomes);
        py::list distances;
        for (const auto& d : run.reconstruction.distances) distances.append(distance_dict(d));
        out["distances"] = distances;
        return out;
      },
      py::arg("tree"), py::arg("adjacencies"), py::arg("families") = py::none(), py::arg("alpha") = 0.5,
      py::arg("beta") = 0.25, py::arg("capping") = "deficient", py::arg("solver") = py::none(),
      py::arg("time_limit") = 3600.0,
      "Builds, solves and decodes. `solver` is an external command template; \"\" forces the internal solver.");

  m.def(
      "distance",
      [](const std::string& a, const std::string& b, const std::optional<std::string>& families,
         const std::string& capping, const std::optional<std::string>& solver) {
        auto ga = genomes_from(a);
        auto gb = genomes_from(b);
        if (ga.size() != 1 || gb.size() != 1) throw Error("distance expects one species per genome");
        return distance_dict(pairwise_distance(ga.begin()->second, gb.begin()->second, families_from(families),
                                               solver_from(solver, 3600), parse_capping(capping)));
      },
      py::arg("a"), py::arg("b"), py::arg("families") = py::none(), py::arg("capping") = "deficient",
      py::arg("solver") = py::none());

  m.def(
      "simulate",
      [](std::uint64_t seed, std::size_t markers, std::size_t leaves, double scale, double surfeit,
         double adversarial, const std::string& noise) {
        SimConfig c;
        c.seed = seed;
        c.root_markers = markers;
        c.leaves = leaves;
        c.scale = scale;
        Rng rng(seed);
        auto sim = evolve(c, rng);
        NoiseConfig nc;
        nc.target_surfeit = surfeit;
        nc.adversarial = adversarial;
        std::vector<std::string> log;
        GenomeMap input;
        if (noise == "random") input = noisy_ancestors(sim, nc, rng, log);
        else if (noise == "neighbour") input = neighbour_projection(sim);
        else throw Error("unknown noise kind '" + noise + "' (expected random or neighbour)");
        GenomeMap ancestors;
        for (const auto& a : sim.ancestors) ancestors.emplace(a, sim.truth.at(a));
        std::ostringstream tree, events, families;
        write_phylogeny(tree, sim.tree);
        write_events(events, sim.events);
        write_family_map(families, lineage_families(sim));
        py::dict out;
        out["tree"] = tree.str();
        out["truth"] = format_adjacencies(sim.truth);
        out["ancestors"] = format_adjacencies(ancestors);
        out["input"] = format_adjacencies(input);
        out["events"] = events.str();
        out["families"] = families.str();
        return out;
      },
      py::arg("seed") = 1, py::arg("markers") = 100, py::arg("leaves") = 10, py::arg("scale") = 1.0,
      py::arg("surfeit") = 1.2, py::arg("adversarial") = 0.0, py::arg("noise") = "random");

  m.def(
      "evaluate",
      [](const std::string& predicted, const std::string& truth) {
        auto metrics = evaluate(genomes_from(predicted), genomes_from(truth));
        py::dict nodes;
        for (const auto& n : metrics.nodes) nodes[py::str(n.node)] = metrics_dict(n);
        py::dict out;
        out["nodes"] = nodes;
        out["mean"] = metrics_dict(metrics.mean);
        return out;
      },
      py::arg("predicted"), py::arg("truth"));
}
