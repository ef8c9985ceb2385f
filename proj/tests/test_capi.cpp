// Exercises the shared library strictly through its C header.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <rtnsim/rtnsim.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

namespace fs = std::filesystem;

namespace {

const char* kConfig = R"({
  "experiment": "time-sweep",
  "pulses": {"x": "C"},
  "rtn": {"delta": 0.0},
  "ensemble": {"n_trajectories": 1},
  "time_grid": {"start": 0.0, "stop": 4.0, "step": 0.01}
})";

}  // namespace

TEST_CASE("version and status names") {
  int major = -1, minor = -1, patch = -1;
  rtnsim_version(&major, &minor, &patch);
  CHECK(major == 0);
  CHECK(minor >= 1);
  CHECK(patch >= 0);
  CHECK(std::strcmp(rtnsim_status_name(RTNSIM_OK), "ok") == 0);
  CHECK(std::strcmp(rtnsim_status_name(RTNSIM_ERR_PARSE), "parse") == 0);
  CHECK(std::strcmp(rtnsim_status_name(RTNSIM_ERR_OVERFLOW), "overflow") == 0);
}

TEST_CASE("null and invalid arguments are rejected with messages") {
  rtnsim_run* run = nullptr;
  CHECK(rtnsim_run_create(nullptr, &run) == RTNSIM_ERR_INVALID_ARGUMENT);
  CHECK(rtnsim_run_create(kConfig, nullptr) == RTNSIM_ERR_INVALID_ARGUMENT);
  CHECK(rtnsim_run_execute(nullptr) == RTNSIM_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(rtnsim_last_error()) > 0);
}

TEST_CASE("config violations surface as parse errors with key paths") {
  rtnsim_run* run = nullptr;
  CHECK(rtnsim_run_create("{\"experiment\":\"time-sweep\"", &run) ==
        RTNSIM_ERR_PARSE);
  CHECK(run == nullptr);

  CHECK(rtnsim_run_create(
            R"({"experiment":"time-sweep","pulses":{"x":"C"},"rtn":{"tau":-1}})",
            &run) == RTNSIM_ERR_PARSE);
  CHECK(std::string(rtnsim_last_error()).find("rtn.tau") != std::string::npos);
}

TEST_CASE("full cycle: create, execute, read rows, write outputs") {
  rtnsim_run* run = nullptr;
  REQUIRE(rtnsim_run_create(kConfig, &run) == RTNSIM_OK);
  REQUIRE(run != nullptr);

  // introspection before execute is rejected
  int count = -1;
  CHECK(rtnsim_run_table_count(run, &count) == RTNSIM_ERR_INVALID_ARGUMENT);

  CHECK(rtnsim_run_set_seed(run, 7) == RTNSIM_OK);
  CHECK(rtnsim_run_set_threads(run, 2) == RTNSIM_OK);

  const std::string config_json = rtnsim_run_config_json(run);
  CHECK(config_json.find("\"master_seed\": 7") != std::string::npos);

  REQUIRE(rtnsim_run_execute(run) == RTNSIM_OK);

  int passed = 0;
  CHECK(rtnsim_run_passed(run, &passed) == RTNSIM_OK);
  CHECK(passed == 1);

  REQUIRE(rtnsim_run_table_count(run, &count) == RTNSIM_OK);
  REQUIRE(count == 1);
  CHECK(std::string(rtnsim_run_table_name(run, 0)) == "time_sweep");
  CHECK(rtnsim_run_table_name(run, 1) == nullptr);

  int rows = 0;
  REQUIRE(rtnsim_run_row_count(run, 0, &rows) == RTNSIM_OK);
  REQUIRE(rows == 401);

  double t = -1.0, f = -1.0, se = -1.0;
  REQUIRE(rtnsim_run_row(run, 0, 0, &t, &f, &se) == RTNSIM_OK);
  CHECK(t == 0.0);
  CHECK(f == 0.0);
  CHECK(se == 0.0);
  REQUIRE(rtnsim_run_row(run, 0, 314, &t, &f, &se) == RTNSIM_OK);
  CHECK(std::abs(t - 3.14) < 1e-12);
  CHECK(f >= 0.999);

  CHECK(rtnsim_run_row(run, 0, rows, &t, &f, &se) ==
        RTNSIM_ERR_INVALID_ARGUMENT);
  CHECK(rtnsim_run_row(run, 2, 0, &t, &f, &se) == RTNSIM_ERR_INVALID_ARGUMENT);

  const std::string summary = rtnsim_run_summary_json(run);
  CHECK(summary.find("optimal_times") != std::string::npos);

  const fs::path dir = fs::temp_directory_path() / "rtnsim_capi_out";
  fs::remove_all(dir);
  REQUIRE(rtnsim_run_write_outputs(run, dir.string().c_str()) == RTNSIM_OK);
  CHECK(fs::exists(dir / "time_sweep.csv"));
  CHECK(fs::exists(dir / "time_sweep.json"));
  fs::remove_all(dir);

  rtnsim_run_destroy(run);
}

TEST_CASE("seed override changes the results deterministically") {
  const char* noisy = R"({
    "experiment": "time-sweep",
    "pulses": {"x": "C"},
    "rtn": {"delta": 0.125, "tau": 0.3},
    "ensemble": {"n_trajectories": 12},
    "time_grid": {"start": 0.0, "stop": 3.2, "step": 0.1}
  })";
  double f_by_seed[2] = {0.0, 0.0};
  for (int pass = 0; pass < 2; ++pass) {
    for (uint64_t seed = 0; seed < 2; ++seed) {
      rtnsim_run* run = nullptr;
      REQUIRE(rtnsim_run_create(noisy, &run) == RTNSIM_OK);
      REQUIRE(rtnsim_run_set_seed(run, seed) == RTNSIM_OK);
      REQUIRE(rtnsim_run_execute(run) == RTNSIM_OK);
      double t, f, se;
      REQUIRE(rtnsim_run_row(run, 0, 31, &t, &f, &se) == RTNSIM_OK);
      if (pass == 0) {
        f_by_seed[seed] = f;
      } else {
        CHECK(f == f_by_seed[seed]);  // bitwise reproducible
      }
      rtnsim_run_destroy(run);
    }
  }
  CHECK(f_by_seed[0] != f_by_seed[1]);
}

TEST_CASE("destroy without execute and destroy(null) are safe") {
  rtnsim_run* run = nullptr;
  REQUIRE(rtnsim_run_create(kConfig, &run) == RTNSIM_OK);
  rtnsim_run_destroy(run);
  rtnsim_run_destroy(nullptr);
}
