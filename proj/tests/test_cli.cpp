// Drives the built CLI binary end to end: exit-code contract, file outputs,
// reproducibility, and the config-file precedence rules.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "pll/bounds.hpp"
#include "pll/stream.hpp"

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path log =
      fs::temp_directory_path() / ("pll_cli_out_" + std::to_string(counter++));
  const std::string command =
      std::string(PLL_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(command.c_str());
  CliResult result;
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  result.output = buffer.str();
  fs::remove(log);
  return result;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path scratch_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / "pll_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("help exits zero for every subcommand and lists flags") {
  CHECK(run_cli("--help").code == 0);
  for (const char* sub :
       {"run", "synth", "bounds-check", "regret-check", "inspect"}) {
    const auto result = run_cli(std::string(sub) + " --help");
    CHECK(result.code == 0);
    CHECK(result.output.find("--help") != std::string::npos);
  }
  const auto run_help = run_cli("run --help");
  for (const char* flag : {"--data", "--learners", "--set-sizes", "--runs",
                           "--rounds", "--eta", "--lambda", "--seed", "--out"})
    CHECK(run_help.output.find(flag) != std::string::npos);
}

TEST_CASE("run on a synthetic source emits curves and a manifest") {
  const auto dir = scratch_dir("run_synth");
  const auto result = run_cli(
      "run --synthetic separable --k 5 --d 10 --gamma 0.2 --rounds 300 "
      "--learners avg-perceptron --set-sizes 2 --runs 5 --seed 7 --out " +
      dir.string());
  CHECK(result.code == 0);
  CHECK(fs::exists(dir / "avg-perceptron_s2.csv"));
  CHECK(fs::exists(dir / "manifest.csv"));
  const std::string manifest = read_file(dir / "manifest.csv");
  CHECK(manifest.find("avg-perceptron_s2.csv,avg-perceptron,2,5,300,7,") !=
        std::string::npos);
}

TEST_CASE("run is bit-reproducible under a fixed seed") {
  const auto dir_a = scratch_dir("repro_a");
  const auto dir_b = scratch_dir("repro_b");
  const std::string args =
      "run --synthetic separable --k 4 --d 6 --gamma 0.1 --rounds 200 "
      "--learners max-pegasos --lambda 0.5 --set-sizes 2 --runs 4 --seed 11 "
      "--out ";
  CHECK(run_cli(args + dir_a.string()).code == 0);
  CHECK(run_cli(args + dir_b.string()).code == 0);
  CHECK(read_file(dir_a / "max-pegasos_s2.csv") ==
        read_file(dir_b / "max-pegasos_s2.csv"));
}

TEST_CASE("run usage errors exit 2") {
  CHECK(run_cli("run --synthetic separable --k 5 --d 4").code == 2);
  const auto dir = scratch_dir("usage");
  CHECK(run_cli("run --set-sizes 9 --synthetic separable --k 5 --d 4 "
                "--rounds 50 --runs 1 --out " +
                dir.string())
            .code == 2);
  CHECK(run_cli("run --data /nope.csv --synthetic separable --out " +
                dir.string())
            .code == 2);  // both sources
  CHECK(run_cli("run --no-such-flag").code == 2);
}

TEST_CASE("config file values are overridden by flags") {
  const auto dir = scratch_dir("config");
  const fs::path config = dir / "run.conf";
  {
    std::ofstream out(config);
    out << "synthetic=separable\nk=4\nd=6\ngamma=0.1\nrounds=50\n"
           "learners=avg-perceptron\nset-sizes=2\nruns=2\nseed=3\nout="
        << (dir / "from_config").string() << "\n";
  }
  CHECK(run_cli("run --config " + config.string()).code == 0);
  const std::string base = read_file(dir / "from_config" / "avg-perceptron_s2.csv");
  CHECK(std::count(base.begin(), base.end(), '\n') == 51);  // header + 50

  // --rounds on the command line wins over rounds= in the file.
  CHECK(run_cli("run --config " + config.string() + " --rounds 30 --out " +
                (dir / "override").string())
            .code == 0);
  const std::string overridden =
      read_file(dir / "override" / "avg-perceptron_s2.csv");
  CHECK(std::count(overridden.begin(), overridden.end(), '\n') == 31);
}

TEST_CASE("synth then inspect round-trips the stream summary") {
  const auto dir = scratch_dir("synth");
  const fs::path stream_file = dir / "stream.csv";
  const fs::path wstar_file = dir / "wstar.csv";
  const auto synth = run_cli(
      "synth --k 5 --d 8 --rounds 150 --set-size 3 --gamma 0.15 --seed 21 "
      "--out " +
      stream_file.string() + " --wstar-out " + wstar_file.string());
  CHECK(synth.code == 0);

  const auto inspect =
      run_cli("inspect " + stream_file.string() + " --wstar " +
              wstar_file.string());
  CHECK(inspect.code == 0);
  CHECK(inspect.output.find("c: 3") != std::string::npos);
  CHECK(inspect.output.find("set_size: 3") != std::string::npos);
  CHECK(inspect.output.find("label histogram:") != std::string::npos);
  CHECK(inspect.output.find("avg-margin vs wstar:") != std::string::npos);

  // The reported radius equals the library's stream_radius.
  const auto stream = pll::load_stream_csv(stream_file);
  char expected[64];
  std::snprintf(expected, sizeof(expected), "R: %.17g",
                pll::stream_radius(stream.items));
  CHECK(inspect.output.find(expected) != std::string::npos);
}

TEST_CASE("inspect on an empty file exits 1") {
  const auto dir = scratch_dir("inspect_empty");
  const fs::path empty = dir / "empty.csv";
  std::ofstream(empty).close();
  const auto result = run_cli("inspect " + empty.string());
  CHECK(result.code == 1);
}

TEST_CASE("bounds-check passes its default grid and honors --break-update") {
  const std::string grid =
      "bounds-check --k-grid 3 --d-grid 5 --s-grid 2 --gamma-grid 0.5 "
      "--rounds 3000 --seeds 2";
  const auto good = run_cli(grid);
  CHECK(good.code == 0);
  CHECK(good.output.find("PASS") != std::string::npos);
  CHECK(good.output.find("FAIL") == std::string::npos);

  const auto broken = run_cli(grid + " --break-update");
  CHECK(broken.code == 1);
  CHECK(broken.output.find("FAIL") != std::string::npos);

  CHECK(run_cli("bounds-check --gamma-grid 0").code == 2);
  CHECK(run_cli("bounds-check --noise 1.5").code == 2);
}

TEST_CASE("bounds-check covers the noisy mode") {
  const auto result = run_cli(
      "bounds-check --k-grid 4 --d-grid 5 --s-grid 2 --gamma-grid 0.1 "
      "--rounds 400 --seeds 1 --noise 0.1 --eval-gammas 0.1,0.5");
  CHECK(result.code == 0);
  // One row per (cell, eval gamma).
  CHECK(result.output.find("0.5") != std::string::npos);
  CHECK(result.output.find("2/2 cells passed") != std::string::npos);
}

TEST_CASE("regret-check prints its constants and validates flags") {
  const auto result =
      run_cli("regret-check --rounds-grid 500 --seeds 1 --epochs 100");
  CHECK(result.code == 0);
  CHECK(result.output.find("G") != std::string::npos);
  CHECK(result.output.find("lnT/(lambdaT)") != std::string::npos);
  CHECK(result.output.find("2/2 cells passed") != std::string::npos);

  CHECK(run_cli("regret-check --lambda-grid 0").code == 2);
  CHECK(run_cli("regret-check --rounds-grid 1").code == 2);
}

TEST_SUITE_END();
