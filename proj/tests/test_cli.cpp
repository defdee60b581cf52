#include <doctest.h>

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"

namespace fs = std::filesystem;

namespace {

const std::string cli = SPPDCJ_CLI;

int run(const std::string& args) {
  const int status = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("sppdcj-cli-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("exit codes") {
  auto dir = scratch("codes");
  write(dir / "tree.tsv", "A\tB\n");
  write(dir / "ok.tsv", "A\t1_t\t1_h\nB\t1_t\t1_h\n");
  write(dir / "bad.tsv", "A\t1_t\n");
  write(dir / "odd.tsv", "A\t1_t\t1_h\nA\t1_h\t2_t\nA\t2_h\tt.1_o\nB\t1_t\t1_h\nB\t2_t\t2_h\n");
  const auto d = " -o " + (dir / "out").string();
  const auto in = " --tree " + (dir / "tree.tsv").string() + " --adjacencies ";

  CHECK(run("--help") == 0);
  CHECK(run("") == 1);
  CHECK(run("frobnicate") == 1);
  CHECK(run("run --no-such-flag") == 1);
  CHECK(run("run" + d + in + (dir / "ok.tsv").string() + " --internal") == 0);
  CHECK(run("run" + d + in + (dir / "bad.tsv").string() + " --internal") == 2);
  CHECK(run("run" + d + in + (dir / "odd.tsv").string() + " --internal") == 3);
  CHECK(run("run" + d + in + (dir / "odd.tsv").string() + " --internal --linearize") == 0);
  CHECK(run("run" + d + in + (dir / "ok.tsv").string() + " --solver-cmd 'false {lp} {sol}'") == 4);
  CHECK(run("run" + d + in + (dir / "ok.tsv").string() + " --internal --alpha 0.9 --beta 0.9") == 1);
  fs::remove_all(dir);
}

TEST_CASE("staged commands agree with run") {
  auto dir = scratch("staged");
  REQUIRE(run("simulate -o " + (dir / "sim").string() + " --seed 4 --markers 8 --leaves 3 --scale 1") == 0);
  const auto sim = dir / "sim";
  const auto in = " --tree " + (sim / "tree.tsv").string() + " --adjacencies " + (sim / "input.tsv").string();
  REQUIRE(run("run -o " + (dir / "run").string() + in + " --internal") == 0);
  REQUIRE(run("build -o " + (dir / "st").string() + in) == 0);
  REQUIRE(run("solve -o " + (dir / "st").string() + " " + (dir / "st" / "model.lp").string() + " --internal") == 0);
  REQUIRE(run("extract -o " + (dir / "st").string() + in + " --solution " + (dir / "st" / "solution.sol").string() +
              " --idmap " + (dir / "st" / "idmap.tsv").string()) == 0);
  CHECK(slurp(dir / "st" / "model.lp") == slurp(dir / "run" / "model.lp"));
  CHECK(slurp(dir / "st" / "genomes.tsv") == slurp(dir / "run" / "genomes.tsv"));
  CHECK(slurp(dir / "st" / "distances.tsv") == slurp(dir / "run" / "distances.tsv"));
  CHECK(fs::exists(dir / "st" / "manifest-extract.json"));

  // a tampered id map is refused
  auto idmap = slurp(dir / "st" / "idmap.tsv");
  idmap.replace(idmap.find("x_"), 2, "q_");
  write(dir / "st" / "idmap.tsv", idmap);
  CHECK(run("extract -o " + (dir / "st").string() + in + " --solution " + (dir / "st" / "solution.sol").string() +
            " --idmap " + (dir / "st" / "idmap.tsv").string()) != 0);
  fs::remove_all(dir);
}

TEST_CASE("rerun reproduces outputs byte for byte") {
  auto dir = scratch("rerun");
  REQUIRE(run("simulate -o " + dir.string() + " --seed 8 --markers 10 --leaves 4 --scale 2 --surfeit 1.4") == 0);
  std::map<std::string, std::string> before;
  for (const char* f : {"tree.tsv", "truth.tsv", "ancestors.tsv", "input.tsv", "events.tsv", "families.tsv"}) {
    before[f] = slurp(dir / f);
    fs::remove(dir / f);
  }
  REQUIRE(run("rerun " + (dir / "manifest-simulate.json").string()) == 0);
  for (const auto& [f, text] : before) CHECK(slurp(dir / f) == text);

  const auto in = " --tree " + (dir / "tree.tsv").string() + " --adjacencies " + (dir / "input.tsv").string() +
                  " --families " + (dir / "families.tsv").string();
  REQUIRE(run("run -o " + (dir / "r").string() + in + " --internal") == 0);
  const auto genomes = slurp(dir / "r" / "genomes.tsv");
  const auto lp = slurp(dir / "r" / "model.lp");
  fs::remove(dir / "r" / "genomes.tsv");
  REQUIRE(run("rerun " + (dir / "r" / "manifest-run.json").string()) == 0);
  CHECK(slurp(dir / "r" / "genomes.tsv") == genomes);
  CHECK(slurp(dir / "r" / "model.lp") == lp);
  fs::remove_all(dir);
}

TEST_CASE("unchanged genomes are recovered exactly") {
  auto dir = scratch("smoke");
  REQUIRE(run("simulate -o " + dir.string() + " --seed 2 --markers 12 --leaves 4 --scale 0 --surfeit 1.3") == 0);
  REQUIRE(run("run -o " + dir.string() + " --internal --tree " + (dir / "tree.tsv").string() + " --adjacencies " +
              (dir / "input.tsv").string()) == 0);
  REQUIRE(run("evaluate -o " + dir.string() + " " + (dir / "genomes.tsv").string() + " " +
              (dir / "ancestors.tsv").string()) == 0);
  std::istringstream in(slurp(dir / "metrics.tsv"));
  bool saw_mean = false;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("mean\t", 0) != 0) continue;
    saw_mean = true;
    std::istringstream cols(line);
    std::string node;
    double precision = 0, recall = 0;
    cols >> node >> precision >> recall;
    CHECK(precision == 1);
    CHECK(recall == 1);
  }
  CHECK(saw_mean);
  fs::remove_all(dir);
}

TEST_CASE("distance subcommand") {
  auto dir = scratch("distance");
  write(dir / "a.tsv", "A\t1_h\t2_t\nA\t2_h\t1_t\n");
  write(dir / "b.tsv", "B\t1_h\t2_h\nB\t2_t\t1_t\n");
  const auto out = dir / "out.txt";
  const int status = std::system((cli + " distance --internal " + (dir / "a.tsv").string() + " " +
                                  (dir / "b.tsv").string() + " > " + out.string())
                                     .c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 0);
  const auto text = slurp(out);
  CHECK(text.find("A-B") != std::string::npos);
  CHECK(text.substr(text.rfind('\t') + 1) == "1\n");
  fs::remove_all(dir);
}
