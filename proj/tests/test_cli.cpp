#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

// End-to-end checks of the command-line tool: every subcommand must be
// byte-deterministic under a fixed seed, outputs must round-trip through
// ingest, and failures must exit nonzero with a one-line error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

#ifndef HALFHOP_CLI_PATH
#error "HALFHOP_CLI_PATH must be defined by the build"
#endif

namespace {

const fs::path kCli = HALFHOP_CLI_PATH;

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           ("halfhop_cli_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args) {
  const std::string cmd = kCli.string() + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the same invocation into two directories and requires every emitted
// file to be byte-identical.
void check_deterministic(const std::string& tag, const std::string& args) {
  TempDir a(tag + "_a"), b(tag + "_b");
  REQUIRE(run("--out " + a.path.string() + " " + args) == 0);
  REQUIRE(run("--out " + b.path.string() + " " + args) == 0);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(a.path))
    files.push_back(entry.path().filename());
  CHECK(!files.empty());
  for (const auto& name : files) {
    INFO(tag << ": " << name.string());
    CHECK(slurp(a.path / name) == slurp(b.path / name));
  }
}

}  // namespace

TEST_CASE("cli: every subcommand is byte-deterministic") {
  TempDir base("inputs");
  REQUIRE(run("--out " + base.path.string() +
              " --seed 5 gen --kind latent --n 40") == 0);
  const std::string graph_flags = " --edges " +
                                  (base.path / "edges.txt").string() +
                                  " --features " +
                                  (base.path / "features.csv").string();

  check_deterministic("gen_grid", "--seed 1 gen --kind grid --rows 4");
  check_deterministic("gen_latent", "--seed 9 gen --kind latent --n 30");
  check_deterministic("augment", "--seed 3 augment" + graph_flags +
                                     " --alpha 0.5 --p 0.6 --init random");
  check_deterministic("rf", "--seed 2 rf --grid 5 --k 4 --alpha 0.5");
  check_deterministic(
      "diffuse", "--seed 4 diffuse" + graph_flags + " --labels " +
                     (base.path / "labels.csv").string() + " --k-max 3");
  check_deterministic("spectra", "--seed 6 spectra --k 1 --alpha 0.5 "
                                 "--empirical --n 60 --trials 2");
  check_deterministic("homophily",
                      "homophily --edges " + (base.path / "edges.txt").string() +
                          " --labels " + (base.path / "labels.csv").string());
}

TEST_CASE("cli: augment output round-trips through ingest") {
  TempDir g("roundtrip_gen"), a("roundtrip_aug"), i("roundtrip_ingest");
  REQUIRE(run("--out " + g.path.string() + " gen --kind grid --rows 4") == 0);
  REQUIRE(run("--out " + a.path.string() + " --seed 1 augment --edges " +
              (g.path / "edges.txt").string() + " --features " +
              (g.path / "features.csv").string() + " --alpha 0.25 --p 1") == 0);
  REQUIRE(run("--out " + i.path.string() + " ingest --edges " +
              (a.path / "edges.txt").string() + " --features " +
              (a.path / "features.csv").string()) == 0);
  CHECK(slurp(a.path / "edges.txt") == slurp(i.path / "edges.txt"));
  CHECK(slurp(a.path / "features.csv") == slurp(i.path / "features.csv"));
}

TEST_CASE("cli: augment with p = 0 reproduces the input edge list") {
  TempDir g("p0_gen"), a("p0_aug");
  REQUIRE(run("--out " + g.path.string() + " gen --kind grid --rows 4") == 0);
  REQUIRE(run("--out " + a.path.string() + " augment --edges " +
              (g.path / "edges.txt").string() + " --p 0") == 0);
  CHECK(slurp(g.path / "edges.txt") == slurp(a.path / "edges.txt"));
}

TEST_CASE("cli: homophily on the path fixture reports 0.5") {
  TempDir d("hom");
  {
    std::ofstream edges(d.path / "edges.txt");
    edges << "# path graph\n0 1\n1 0\n1 2\n2 1\n";
    std::ofstream labels(d.path / "labels.csv");
    labels << "0\n0\n1\n";
  }
  TempDir out("hom_out");
  REQUIRE(run("--out " + out.path.string() + " homophily --edges " +
              (d.path / "edges.txt").string() + " --labels " +
              (d.path / "labels.csv").string()) == 0);
  const std::string report = slurp(out.path / "homophily.json");
  CHECK(report.find("0.5") != std::string::npos);
}

TEST_CASE("cli: failures exit nonzero") {
  TempDir d("bad");
  CHECK(run("--out " + d.path.string() + " spectra --k 2 --alpha 0.5") == 1);
  {
    std::ofstream edges(d.path / "edges.txt");
    edges << "0 1\nnot an edge\n";
  }
  CHECK(run("--out " + d.path.string() + " ingest --edges " +
            (d.path / "edges.txt").string()) == 1);
  CHECK(run("--out " + d.path.string() +
            " gen --kind latent --n 10 --sigma-diag -1") == 1);
}
