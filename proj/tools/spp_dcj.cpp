// spp_dcj: ancestral gene order reconstruction under the DCJ-indel model.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <unistd.h>

#include "sppdcj/diagram.hpp"
#include "sppdcj/extract.hpp"
#include "sppdcj/ilp.hpp"
#include "sppdcj/io.hpp"
#include "sppdcj/linearize.hpp"
#include "sppdcj/oracle.hpp"
#include "sppdcj/pipeline.hpp"
#include "sppdcj/sim.hpp"
#include "sppdcj/version.hpp"

namespace fs = std::filesystem;
using namespace sppdcj;
using json = nlohmann::ordered_json;

namespace {

enum Exit { ok = 0, usage = 1, parse = 2, infeasible = 3, solver_failure = 4 };

struct InfeasibleError : Error {
  using Error::Error;
};

using Clock = std::chrono::steady_clock;

class Manifest {
 public:
  Manifest(std::string command, std::vector<std::string> argv) {
    doc_["subcommand"] = std::move(command);
    doc_["tool_version"] = kVersion;
    doc_["argv"] = std::move(argv);
    doc_["inputs"] = json::object();
    doc_["parameters"] = json::object();
    doc_["outputs"] = json::array();
    doc_["wall_seconds"] = json::object();
  }
  void input(const std::string& key, const std::string& path) { doc_["inputs"][key] = path; }
  template <class T>
  void param(const std::string& key, const T& value) {
    doc_["parameters"][key] = value;
  }
  void output(const std::string& path) { doc_["outputs"].push_back(path); }
  void stage(const std::string& name, Clock::time_point start) {
    doc_["wall_seconds"][name] = std::chrono::duration<double>(Clock::now() - start).count();
  }
  void write(const fs::path& dir) const {
    const auto path = dir / ("manifest-" + doc_["subcommand"].get<std::string>() + ".json");
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << doc_.dump(2) << '\n';
  }

 private:
  json doc_;
};

struct BuildFlags {
  double alpha = 0.5;
  double beta = 0.25;
  bool no_optional = false;
  std::string capping = "deficient";
  bool no_reduce = false;
  std::size_t jobs = 1;
  std::size_t singleton_cap = 100'000;

  void add(CLI::App* app) {
    app->add_option("--alpha", alpha, "weight of the DCJ-indel distance")->capture_default_str();
    app->add_option("--beta", beta, "weight of the telomere penalty")->capture_default_str();
    app->add_flag("--no-optional-constraints", no_optional, "drop transition support and even telomere rows");
    app->add_option("--capping", capping, "deficient or complete")->capture_default_str();
    app->add_flag("--no-reduce", no_reduce, "keep all telomere extremity edges");
    app->add_option("--jobs", jobs, "parallel diagram construction")->capture_default_str();
    app->add_option("--singleton-cap", singleton_cap, "maximum circular singleton candidates per diagram")
        ->capture_default_str();
  }
  BuildOptions options() const {
    BuildOptions o;
    o.alpha = alpha;
    o.beta = beta;
    o.optional_constraints = !no_optional;
    o.capping = parse_capping(capping);
    o.reduce_telomeres = !no_reduce;
    o.jobs = jobs;
    o.singleton_cap = singleton_cap;
    return o;
  }
  void record(Manifest& m) const {
    m.param("alpha", alpha);
    m.param("beta", beta);
    m.param("optional_constraints", !no_optional);
    m.param("capping", capping);
    m.param("reduce", !no_reduce);
    m.param("jobs", jobs);
    m.param("singleton_cap", singleton_cap);
  }
};

struct SolverFlags {
  bool internal = false;
  std::string command;
  double time_limit = 3600;
  std::size_t max_nodes = 50'000'000;

  void add(CLI::App* app) {
    app->add_flag("--internal", internal, "use the built-in branch and bound");
    app->add_option("--solver-cmd", command, "external solver command with {lp} and {sol} (default: $SPP_DCJ_SOLVER)");
    app->add_option("--time-limit", time_limit, "seconds")->capture_default_str();
    app->add_option("--max-nodes", max_nodes, "branch and bound node budget")->capture_default_str();
  }
  SolverChoice choice(const fs::path& work_dir) const {
    SolverChoice s = default_solver();
    if (!command.empty()) {
      s.internal = false;
      s.command = command;
    }
    if (internal) s.internal = true;
    s.time_limit = time_limit;
    s.budget.max_nodes = max_nodes;
    s.work_dir = work_dir.string();
    return s;
  }
  void record(Manifest& m, const SolverChoice& s) const {
    m.param("solver", s.internal ? std::string("internal") : s.command);
    m.param("time_limit", time_limit);
    m.param("max_nodes", max_nodes);
  }
};

FamilyAssignment families_from(const std::string& path) {
  return path.empty() ? FamilyAssignment{} : read_family_map(path);
}

SolveResult checked(SolveResult r) {
  if (r.status == SolveStatus::infeasible) throw InfeasibleError("model is infeasible");
  if (!r.has_solution()) throw SolverError(std::string("no solution found (") + to_string(r.status) + ")");
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  CLI::App app{"Small parsimony under the DCJ-indel model"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_dir = ".";
  app.add_option("-o,--out-dir", out_dir, "directory for outputs")->capture_default_str();

  // linearize
  auto* lin = app.add_subcommand("linearize", "augment degenerate genomes with zero-weight telomeric adjacencies");
  std::string lin_in;
  lin->add_option("adjacencies", lin_in, "adjacency TSV")->required();

  // build
  auto* build = app.add_subcommand("build", "write the integer program (model.lp, idmap.tsv)");
  std::string tree_path, adj_path, fam_path;
  BuildFlags bflags;
  build->add_option("--tree", tree_path, "phylogeny TSV")->required();
  build->add_option("--adjacencies", adj_path, "adjacency TSV")->required();
  build->add_option("--families", fam_path, "family map TSV");
  bflags.add(build);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "solve model.lp (solution.sol)");
  std::string lp_path;
  SolverFlags sflags;
  solve_cmd->add_option("model", lp_path, "LP file")->required();
  sflags.add(solve_cmd);

  // extract
  auto* extract = app.add_subcommand("extract", "decode a solution (genomes.tsv, distances.tsv)");
  std::string sol_path, idmap_path;
  extract->add_option("--solution", sol_path, "solution file")->required();
  extract->add_option("--idmap", idmap_path, "id map written by build")->required();
  extract->add_option("--tree", tree_path, "phylogeny TSV")->required();
  extract->add_option("--adjacencies", adj_path, "adjacency TSV")->required();
  extract->add_option("--families", fam_path, "family map TSV");

  // run
  auto* run = app.add_subcommand("run", "build, solve and extract in one go");
  bool run_linearize = false;
  run->add_option("--tree", tree_path, "phylogeny TSV")->required();
  run->add_option("--adjacencies", adj_path, "adjacency TSV")->required();
  run->add_option("--families", fam_path, "family map TSV");
  run->add_flag("--linearize", run_linearize, "augment the genomes first");
  bflags.add(run);
  sflags.add(run);

  // distance
  auto* dist = app.add_subcommand("distance", "DCJ-indel distance of two genomes");
  std::string genome_a, genome_b;
  dist->add_option("genome_a", genome_a, "adjacency TSV with one species")->required();
  dist->add_option("genome_b", genome_b, "adjacency TSV with one species")->required();
  dist->add_option("--families", fam_path, "family map TSV");
  std::string dist_capping = "deficient";
  dist->add_option("--capping", dist_capping, "deficient or complete")->capture_default_str();
  sflags.add(dist);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "simulate genomes along a random tree");
  SimConfig sim_cfg;
  NoiseConfig noise_cfg;
  std::string noise_kind = "random";
  simulate->add_option("--seed", sim_cfg.seed)->capture_default_str();
  simulate->add_option("--markers", sim_cfg.root_markers, "root genome size")->capture_default_str();
  simulate->add_option("--leaves", sim_cfg.leaves)->capture_default_str();
  simulate->add_option("--scale", sim_cfg.scale, "expected events per branch")->capture_default_str();
  simulate->add_option("--inversion", sim_cfg.rates.inversion)->capture_default_str();
  simulate->add_option("--transposition", sim_cfg.rates.transposition)->capture_default_str();
  simulate->add_option("--duplication", sim_cfg.rates.duplication)->capture_default_str();
  simulate->add_option("--deletion", sim_cfg.rates.deletion)->capture_default_str();
  simulate->add_option("--inversion-extension", sim_cfg.extensions.inversion)->capture_default_str();
  simulate->add_option("--transposition-extension", sim_cfg.extensions.transposition)->capture_default_str();
  simulate->add_option("--duplication-extension", sim_cfg.extensions.duplication)->capture_default_str();
  simulate->add_option("--deletion-extension", sim_cfg.extensions.deletion)->capture_default_str();
  simulate->add_option("--noise", noise_kind, "random or neighbour")->capture_default_str();
  simulate->add_option("--surfeit", noise_cfg.target_surfeit, "target surfeit of ancestors")->capture_default_str();
  simulate->add_option("--adversarial", noise_cfg.adversarial, "fraction of adversarial noise")->capture_default_str();

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "precision and recall against true genomes (metrics.tsv)");
  std::string pred_path, truth_path;
  eval->add_option("predicted", pred_path, "adjacency TSV")->required();
  eval->add_option("truth", truth_path, "adjacency TSV; its species are evaluated")->required();

  // rerun
  auto* rerun = app.add_subcommand("rerun", "repeat the command recorded in a manifest");
  std::string manifest_path;
  rerun->add_option("manifest", manifest_path, "manifest JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? ok : usage;
  }

  const fs::path dir = out_dir;
  try {
    fs::create_directories(dir);
    auto* sub = app.get_subcommands().front();
    Manifest manifest(sub->get_name(), args);

    if (sub == rerun) {
      std::ifstream in(manifest_path);
      if (!in) throw Error("cannot open " + manifest_path);
      auto doc = json::parse(in);
      auto recorded = doc.at("argv").get<std::vector<std::string>>();
      if (recorded.size() < 2 || recorded[1] == "rerun") throw Error("manifest has no command");
      recorded[0] = args[0];
      std::vector<char*> cargs;
      for (auto& a : recorded) cargs.push_back(a.data());
      cargs.push_back(nullptr);
      ::execvp(cargs[0], cargs.data());
      throw Error("cannot execute " + recorded[0]);
    }

    if (sub == lin) {
      auto t0 = Clock::now();
      auto genomes = read_adjacencies(lin_in);
      GenomeMap out;
      for (const auto& [name, g] : genomes) out.emplace(name, augment(g));
      write_adjacencies((dir / "augmented.tsv").string(), out);
      manifest.input("adjacencies", lin_in);
      manifest.output((dir / "augmented.tsv").string());
      manifest.stage("linearize", t0);
      manifest.write(dir);
      return ok;
    }

    if (sub == build) {
      auto t0 = Clock::now();
      auto tree = read_phylogeny(tree_path);
      auto genomes = read_adjacencies(adj_path);
      auto options = bflags.options();
      auto built = build_model(tree, genomes, families_from(fam_path), options);
      for (const auto& w : built.warnings) std::cerr << "warning: " << w << '\n';
      write_lp((dir / "model.lp").string(), built.model);
      write_idmap((dir / "idmap.tsv").string(), built.model, idmap_header(options));
      manifest.input("tree", tree_path);
      manifest.input("adjacencies", adj_path);
      if (!fam_path.empty()) manifest.input("families", fam_path);
      bflags.record(manifest);
      manifest.param("diagrams", built.diagrams.size());
      manifest.param("variables", built.model.variables().size());
      manifest.param("constraints", built.model.constraints().size());
      manifest.output((dir / "model.lp").string());
      manifest.output((dir / "idmap.tsv").string());
      manifest.stage("build", t0);
      manifest.write(dir);
      return ok;
    }

    if (sub == solve_cmd) {
      auto t0 = Clock::now();
      auto model = read_lp(lp_path);
      auto choice = sflags.choice(dir / "solver");
      auto result = solve(model, choice);
      write_solution((dir / "solution.sol").string(), model, result);
      manifest.input("model", lp_path);
      sflags.record(manifest, choice);
      manifest.param("status", to_string(result.status));
      manifest.output((dir / "solution.sol").string());
      manifest.stage("solve", t0);
      manifest.write(dir);
      std::cerr << to_string(result.status);
      if (result.has_solution()) std::cerr << " objective " << format_number(result.objective);
      std::cerr << '\n';
      checked(std::move(result));
      return ok;
    }

    if (sub == extract) {
      auto t0 = Clock::now();
      auto tree = read_phylogeny(tree_path);
      auto genomes = read_adjacencies(adj_path);
      auto idmap = read_idmap(idmap_path);
      auto options = options_from_header(idmap.header);
      auto built = build_model(tree, genomes, families_from(fam_path), options);
      std::vector<std::string> names;
      for (const auto& v : built.model.variables()) names.push_back(v.name);
      if (names != idmap.names) throw Error("the id map does not match the model rebuilt from the inputs");
      auto file = read_solution(sol_path);
      auto result = checked(to_result(built.model, file));
      auto rec = decode(built, genomes, result);
      if (file.objective && std::abs(*file.objective - rec.objective) > 1e-6) {
        throw Error("objective audit failed: solver reports " + format_number(*file.objective) + ", decoded " +
                    format_number(rec.objective));
      }
      write_adjacencies((dir / "genomes.tsv").string(), rec.genomes);
      write_distances((dir / "distances.tsv").string(), rec.distances);
      manifest.input("solution", sol_path);
      manifest.input("idmap", idmap_path);
      manifest.input("tree", tree_path);
      manifest.input("adjacencies", adj_path);
      manifest.param("objective", rec.objective);
      manifest.output((dir / "genomes.tsv").string());
      manifest.output((dir / "distances.tsv").string());
      manifest.stage("extract", t0);
      manifest.write(dir);
      return ok;
    }

    if (sub == run) {
      auto tree = read_phylogeny(tree_path);
      auto genomes = read_adjacencies(adj_path);
      manifest.input("tree", tree_path);
      manifest.input("adjacencies", adj_path);
      if (!fam_path.empty()) manifest.input("families", fam_path);
      if (run_linearize) {
        auto t0 = Clock::now();
        GenomeMap out;
        for (const auto& [name, g] : genomes) out.emplace(name, augment(g));
        genomes = std::move(out);
        write_adjacencies((dir / "augmented.tsv").string(), genomes);
        manifest.output((dir / "augmented.tsv").string());
        manifest.stage("linearize", t0);
      }
      auto options = bflags.options();
      bflags.record(manifest);
      auto t0 = Clock::now();
      auto built = build_model(tree, genomes, families_from(fam_path), options);
      for (const auto& w : built.warnings) std::cerr << "warning: " << w << '\n';
      write_lp((dir / "model.lp").string(), built.model);
      write_idmap((dir / "idmap.tsv").string(), built.model, idmap_header(options));
      manifest.stage("build", t0);
      t0 = Clock::now();
      auto choice = sflags.choice(dir / "solver");
      sflags.record(manifest, choice);
      auto result = solve(built.model, choice);
      write_solution((dir / "solution.sol").string(), built.model, result);
      manifest.param("status", to_string(result.status));
      manifest.stage("solve", t0);
      result = checked(std::move(result));
      t0 = Clock::now();
      auto rec = decode(built, genomes, result);
      if (std::abs(rec.objective - result.objective) > 1e-6) {
        throw Error("objective audit failed: solver " + format_number(result.objective) + ", decoded " +
                    format_number(rec.objective));
      }
      write_adjacencies((dir / "genomes.tsv").string(), rec.genomes);
      write_distances((dir / "distances.tsv").string(), rec.distances);
      manifest.stage("extract", t0);
      for (const char* f : {"model.lp", "idmap.tsv", "solution.sol", "genomes.tsv", "distances.tsv"}) {
        manifest.output((dir / f).string());
      }
      manifest.write(dir);
      return ok;
    }

    if (sub == dist) {
      auto ga = read_adjacencies(genome_a);
      auto gb = read_adjacencies(genome_b);
      if (ga.size() != 1 || gb.size() != 1) throw Error("distance expects one species per genome file");
      const auto& a = ga.begin()->second;
      const auto& b = gb.begin()->second;
      for (const auto* g : {&a, &b}) {
        if (!is_genome(*g)) throw Error(g->species() + " is not a genome (some extremity is used more than once)");
      }
      auto row = pairwise_distance(a, b, families_from(fam_path), sflags.choice(dir / "solver"),
                                   parse_capping(dist_capping));
      write_distances(std::cout, {row});
      return ok;
    }

    if (sub == simulate) {
      auto t0 = Clock::now();
      Rng rng(sim_cfg.seed);
      auto sim = evolve(sim_cfg, rng);
      std::vector<std::string> log;
      GenomeMap input;
      if (noise_kind == "random") {
        input = noisy_ancestors(sim, noise_cfg, rng, log);
      } else if (noise_kind == "neighbour") {
        input = neighbour_projection(sim);
      } else {
        throw Error("unknown noise kind '" + noise_kind + "' (expected random or neighbour)");
      }
      for (const auto& line : log) std::cerr << "note: " << line << '\n';
      {
        std::ofstream out(dir / "tree.tsv");
        write_phylogeny(out, sim.tree);
      }
      GenomeMap ancestors;
      for (const auto& a : sim.ancestors) ancestors.emplace(a, sim.truth.at(a));
      write_adjacencies((dir / "truth.tsv").string(), sim.truth);
      write_adjacencies((dir / "ancestors.tsv").string(), ancestors);
      write_adjacencies((dir / "input.tsv").string(), input);
      write_events((dir / "events.tsv").string(), sim.events);
      write_family_map((dir / "families.tsv").string(), lineage_families(sim));
      manifest.param("seed", sim_cfg.seed);
      manifest.param("markers", sim_cfg.root_markers);
      manifest.param("leaves", sim_cfg.leaves);
      manifest.param("scale", sim_cfg.scale);
      manifest.param("noise", noise_kind);
      manifest.param("surfeit", noise_cfg.target_surfeit);
      manifest.param("adversarial", noise_cfg.adversarial);
      for (const char* f : {"tree.tsv", "truth.tsv", "ancestors.tsv", "input.tsv", "events.tsv", "families.tsv"}) {
        manifest.output((dir / f).string());
      }
      manifest.stage("simulate", t0);
      manifest.write(dir);
      return ok;
    }

    if (sub == eval) {
      auto m = evaluate(read_adjacencies(pred_path), read_adjacencies(truth_path));
      write_metrics((dir / "metrics.tsv").string(), m);
      write_metrics(std::cout, m);
      return ok;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return parse;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return infeasible;
  } catch (const ScaleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return infeasible;
  } catch (const GenomeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return infeasible;
  } catch (const DiagramError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return infeasible;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return solver_failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  }
  return ok;
}
