// End-to-end checks of the command line tool: exit-code contract (0 success,
// 1 runtime error, 2 usage/config error), output-directory resolution
// including the NYFR_OUT_DIR environment variable, and the files each
// subcommand writes.  The binary path comes in via NYFR_CLI_PATH.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "nyfr/io.hpp"
#include "nyfr/scene.hpp"
#include "nyfr/sweep.hpp"

using namespace nyfr;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("nyfr_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

std::string cli() { return std::string("\"") + NYFR_CLI_PATH + "\""; }

// Runs a shell command with stdout/stderr silenced and returns its exit code.
int run(const std::string& args) {
  const std::string cmd = args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("help exits with success") {
  CHECK(run(cli() + " --help") == 0);
  CHECK(run(cli() + " flops --help") == 0);
  CHECK(run(cli() + " simulate --help") == 0);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run(cli()) == 2);                         // missing subcommand
  CHECK(run(cli() + " frobnicate") == 2);         // unknown subcommand
  CHECK(run(cli() + " flops --bogus-flag") == 2); // unknown option
  CHECK(run(cli() + " sweep") == 2);              // missing required --config
  CHECK(run(cli() + " flops --n notanumber") == 2);
}

TEST_CASE("config errors exit with code 2") {
  TempDir tmp;
  CHECK(run(cli() + " simulate --scene " + tmp.file("missing.json")) == 2);
  CHECK(run(cli() + " reconstruct --small --method bogus") == 2);
  {
    std::ofstream out(tmp.file("bad.json"));
    out << "{not json";
  }
  CHECK(run(cli() + " simulate --scene " + tmp.file("bad.json")) == 2);
}

TEST_CASE("runtime errors exit with code 1") {
  TempDir tmp;
  // A regular file in the middle of the output path makes directory creation
  // fail at run time even for root.
  { std::ofstream out(tmp.file("blocker")); }
  CHECK(run(cli() + " simulate --small --out " + tmp.file("blocker") +
            "/sub") == 1);
}

TEST_CASE("simulate writes the advertised artifacts") {
  TempDir tmp;
  const std::string out = tmp.file("sim");
  REQUIRE(run(cli() + " simulate --small --seed 42 --out " + out) == 0);
  CHECK(fs::exists(out + "/scene.json"));
  CHECK(fs::exists(out + "/rf_signal.bin"));
  CHECK(fs::exists(out + "/measurement.bin"));
  CHECK(fs::exists(out + "/measurement.json"));
  CHECK(fs::exists(out + "/spectrogram.csv"));

  const SceneConfig scene = load_scene(out + "/scene.json");
  CHECK(scene.seed == 42);
  const MeasurementRecord rec = read_measurement(out + "/measurement");
  CHECK(rec.config.grid.n_samples == scene.config.grid.n_samples);
}

TEST_CASE("NYFR_OUT_DIR supplies the default output directory") {
  TempDir tmp;
  const std::string out = tmp.file("envdir");
  REQUIRE(run("NYFR_OUT_DIR=" + out + " " + cli() +
              " simulate --small --seed 5") == 0);
  CHECK(fs::exists(out + "/scene.json"));
  CHECK(fs::exists(out + "/measurement.bin"));
}

TEST_CASE("reconstruct from a saved measurement writes a spectrum") {
  TempDir tmp;
  const std::string sim_out = tmp.file("sim");
  REQUIRE(run(cli() + " simulate --small --seed 11 --out " + sim_out) == 0);

  const std::string rec_out = tmp.file("rec");
  REQUIRE(run(cli() + " reconstruct --measurement " + sim_out +
              "/measurement --out " + rec_out) == 0);
  const auto lines = read_lines(rec_out + "/spectrum.csv");
  REQUIRE(lines.size() > 3);
  CHECK(lines[0].rfind("# nyfr", 0) == 0);
  CHECK(lines[2] == "freq_hz,power");
}

TEST_CASE("reconstruct on the built-in reduced scene succeeds") {
  TempDir tmp;
  const std::string out = tmp.file("rec_small");
  REQUIRE(run(cli() + " reconstruct --small --seed 7 --out " + out) == 0);
  CHECK(fs::exists(out + "/spectrum.csv"));
}

TEST_CASE("flops prints the table and optionally writes a csv") {
  TempDir tmp;
  CHECK(run(cli() + " flops --n 32000 --m 4000 --l 100 --k 10") == 0);
  const std::string csv = tmp.file("flops.csv");
  REQUIRE(run(cli() + " flops --n 2048 --m 256 --csv " + csv) == 0);
  const auto lines = read_lines(csv);
  REQUIRE(lines.size() >= 5);  // build id + header + proposed + time + freq
  CHECK(lines[0].rfind("# nyfr", 0) == 0);
  CHECK(lines[1] == "method,n,m,l_snapshots,sparsity_k,total_flops");
}

TEST_CASE("sweep runs a tiny recipe and writes results") {
  TempDir tmp;

  SweepSpec spec;
  LoSpec lo;
  lo.adc_rate_hz = 4e9;
  lo.mod_kind = LoModKind::sinusoid;
  lo.mod_amplitude_rad = 2.0;
  lo.mod_freq_hz = 31.25e6;
  spec.config = make_nyfr_config(lo, 4, 4, make_grid(1024, 16e9));
  spec.scene.kinds = {SignalKind::mp};
  spec.scene.carrier_min_hz = 2.5e9;   // the 4-zone grid spans [-2, 14) GHz
  spec.scene.carrier_max_hz = 13.5e9;
  spec.axis = SweepAxis::snr_db;
  spec.values = {10.0};
  spec.trials = 2;
  spec.base_seed = 999;
  spec.threads = 1;
  const std::string recipe = tmp.file("recipe.json");
  save_sweep(recipe, spec);

  const std::string out = tmp.file("sweep");
  REQUIRE(run(cli() + " sweep --config " + recipe + " --out " + out) == 0);
  CHECK(fs::exists(out + "/sweep.recipe.json"));
  const auto lines = read_lines(out + "/sweep.csv");
  REQUIRE(lines.size() >= 4);
  CHECK(lines[2] == "axis,value,method,eligible,total,accuracy_pct,errors,"
                    "mean_flops,wall_ms");
  CHECK(lines[3].rfind("snr_db,10,proposed,", 0) == 0);
}

TEST_CASE("sweep respects command line overrides") {
  TempDir tmp;

  SweepSpec spec;
  LoSpec lo;
  lo.adc_rate_hz = 4e9;
  lo.mod_kind = LoModKind::sinusoid;
  lo.mod_amplitude_rad = 2.0;
  lo.mod_freq_hz = 31.25e6;
  spec.config = make_nyfr_config(lo, 4, 4, make_grid(1024, 16e9));
  spec.scene.kinds = {SignalKind::mp};
  spec.scene.carrier_min_hz = 2.5e9;
  spec.scene.carrier_max_hz = 13.5e9;
  spec.values = {10.0};
  spec.trials = 50;  // overridden below
  const std::string recipe = tmp.file("recipe.json");
  save_sweep(recipe, spec);

  const std::string out = tmp.file("sweep");
  REQUIRE(run(cli() + " sweep --config " + recipe +
              " --trials 3 --seed 7 --out " + out) == 0);
  const SweepSpec echoed = load_sweep(out + "/sweep.recipe.json");
  CHECK(echoed.trials == 3);
  CHECK(echoed.base_seed == 7);

  const auto lines = read_lines(out + "/sweep.csv");
  REQUIRE(lines.size() >= 4);
  // total column reflects the overridden trial count
  CHECK(lines[3].find(",3,") != std::string::npos);
}
