#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "config.hpp"
#include "errors.hpp"
#include "runner.hpp"

using namespace rtnsim;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

std::string slurp(const fs::path& path) {
  std::ifstream stream(path, std::ios::binary);
  std::ostringstream out;
  out << stream.rdbuf();
  REQUIRE(stream);
  return out.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("rtnsim_test_" + tag)) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

const char* kQuickTimeSweep = R"({
  "experiment": "time-sweep",
  "pulses": {"x": "C"},
  "rtn": {"delta": 0.0},
  "ensemble": {"n_trajectories": 1},
  "time_grid": {"start": 0.0, "stop": 4.0, "step": 0.02}
})";

}  // namespace

TEST_CASE("time sweep: table shape, optima, and peak") {
  const RunConfig config = parse_config(kQuickTimeSweep);
  const RunOutputs out = execute(config, 1);
  REQUIRE(out.tables.size() == 1);
  CHECK(out.tables[0].name == "time_sweep");
  CHECK(out.tables[0].abscissa_name == "t_ps");
  CHECK(out.tables[0].value_name == "fidelity");
  CHECK(out.tables[0].rows.size() == 201);
  CHECK(out.pass);

  REQUIRE(out.summary["optimal_times"].size() == 1);
  CHECK(std::abs(out.summary["optimal_times"][0].get<double>() - kPi) < 0.01);
  CHECK(out.summary["peak_fidelity"].get<double>() >= 0.999);
  CHECK(out.summary["master_seed"].get<std::uint64_t>() == 0);
}

TEST_CASE("csv bytes are identical across repeats and thread counts") {
  const RunConfig config = parse_config(R"({
    "experiment": "time-sweep",
    "pulses": {"x": "BP"},
    "rtn": {"delta": 0.125, "tau": 0.4},
    "ensemble": {"n_trajectories": 24, "master_seed": 11},
    "time_grid": {"start": 0.0, "stop": 5.0, "step": 0.05}
  })");
  const std::string reference = csv_text(execute(config, 1).tables[0]);
  CHECK(reference.rfind("t_ps,fidelity,stderr\n", 0) == 0);
  for (int threads : {1, 2, 5}) {
    CHECK(csv_text(execute(config, threads).tables[0]) == reference);
  }
}

TEST_CASE("csv uses 12 significant digits") {
  ResultTable table{"t", "t_ps", "fidelity",
                    {{0.25, 1.0 / 3.0, 0.0}, {10.0, 1e-7, 0.125}}};
  CHECK(csv_text(table) ==
        "t_ps,fidelity,stderr\n"
        "0.25,0.333333333333,0\n"
        "10,1e-07,0.125\n");
}

TEST_CASE("write_outputs produces the CSV and a sidecar that re-runs") {
  TempDir dir("writer");
  const RunConfig config = parse_config(kQuickTimeSweep);
  const RunOutputs out = execute(config, 2);
  const auto written = write_outputs(config, out, dir.path.string());
  REQUIRE(written.size() == 2);

  const fs::path csv_path = dir.path / "time_sweep.csv";
  const fs::path sidecar_path = dir.path / "time_sweep.json";
  REQUIRE(fs::exists(csv_path));
  REQUIRE(fs::exists(sidecar_path));
  CHECK(slurp(csv_path) == csv_text(out.tables[0]));

  // the sidecar alone reproduces the run byte for byte
  const RunConfig replay = parse_config(slurp(sidecar_path));
  CHECK(replay == config);
  const RunOutputs again = execute(replay, 1);
  CHECK(csv_text(again.tables[0]) == slurp(csv_path));
}

TEST_CASE("tau sweep runner") {
  const RunConfig config = parse_config(R"({
    "experiment": "tau-sweep",
    "pulses": {"x": "C"},
    "gate_time": 3.14,
    "rtn": {"delta": 0.125},
    "ensemble": {"n_trajectories": 10},
    "tau_grid": {"min": 0.01, "max": 1.0, "points": 5}
  })");
  const RunOutputs out = execute(config, 2);
  REQUIRE(out.tables.size() == 1);
  CHECK(out.tables[0].name == "tau_sweep");
  CHECK(out.tables[0].abscissa_name == "tau_ps");
  REQUIRE(out.tables[0].rows.size() == 5);
  CHECK(out.tables[0].rows.front().abscissa == 0.01);
  CHECK(out.tables[0].rows.back().abscissa == 1.0);
  CHECK(out.summary["min_fidelity"].get<double>() <=
        out.summary["max_fidelity"].get<double>());
}

TEST_CASE("validate-unitarity runner defaults to the three presets on x") {
  const RunConfig config = parse_config(R"({
    "experiment": "validate-unitarity",
    "rtn": {"delta": 0.125, "tau": 0.01},
    "ensemble": {"n_trajectories": 2},
    "time_grid": {"start": 0.0, "stop": 3.0, "step": 0.05}
  })");
  const RunOutputs out = execute(config, 2);
  REQUIRE(out.tables.size() == 3);
  CHECK(out.tables[0].name == "validate_unitarity_C");
  CHECK(out.tables[1].name == "validate_unitarity_QW");
  CHECK(out.tables[2].name == "validate_unitarity_BP");
  CHECK(out.tables[0].value_name == "max_defect");
  CHECK(out.pass);
  CHECK(out.summary["pass"].get<bool>());
  CHECK(out.summary["max_route_divergence"].get<double>() <= 1e-6);
  CHECK(out.summary["tolerance"].get<double>() == 1e-6);
}

TEST_CASE("sequence scan runner emits per-sequence tables") {
  const RunConfig config = parse_config(R"({
    "experiment": "sequence-scan",
    "rtn": {"delta": 0.125, "tau": 0.001},
    "ensemble": {"n_trajectories": 4},
    "time_grid": {"start": 0.0, "stop": 4.2, "step": 0.05},
    "tau_grid": {"min": 0.01, "max": 1.0, "points": 2},
    "optimum_threshold": 0.9
  })");
  const RunOutputs out = execute(config, 2);
  REQUIRE(out.summary["sequences"].size() == 6);

  std::size_t expected_tables = 6;  // one time table per sequence
  for (const auto& seq : out.summary["sequences"]) {
    expected_tables += seq["tau_sweeps"].size();
    CHECK(seq["peak_fidelity"].get<double>() > 0.0);
  }
  CHECK(out.tables.size() == expected_tables);
  CHECK(out.tables[0].name.rfind("seq_", 0) == 0);
}
