// Command-line front end; talks to the simulator through the C API only.

#include <rtnsim/rtnsim.h>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

namespace {

int fail_with(int status) {
  std::fprintf(stderr, "rtnsim: error (%s): %s\n", rtnsim_status_name(status),
               rtnsim_last_error());
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-flip gate fidelity under random telegraph noise"};

  std::string config_path;
  std::string out_dir = ".";
  int threads = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;

  app.add_option("--config", config_path, "JSON config file (or a sidecar from a previous run)")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory for CSV and sidecar files");
  app.add_option("--threads", threads, "worker threads (0 = available parallelism)");
  app.add_option("--seed", seed, "override ensemble.master_seed");

  CLI11_PARSE(app, argc, argv);
  seed_given = app.count("--seed") > 0;

  std::ifstream file(config_path, std::ios::binary);
  std::ostringstream text;
  text << file.rdbuf();
  if (!file) {
    std::fprintf(stderr, "rtnsim: cannot read '%s'\n", config_path.c_str());
    return 1;
  }

  rtnsim_run* run = nullptr;
  if (int rc = rtnsim_run_create(text.str().c_str(), &run)) return fail_with(rc);
  if (seed_given) {
    if (int rc = rtnsim_run_set_seed(run, seed)) return fail_with(rc);
  }
  if (int rc = rtnsim_run_set_threads(run, threads)) return fail_with(rc);

  if (int rc = rtnsim_run_execute(run)) {
    rtnsim_run_destroy(run);
    return fail_with(rc);
  }
  if (int rc = rtnsim_run_write_outputs(run, out_dir.c_str())) {
    rtnsim_run_destroy(run);
    return fail_with(rc);
  }

  std::printf("%s\n", rtnsim_run_summary_json(run));

  int passed = 1;
  rtnsim_run_passed(run, &passed);
  rtnsim_run_destroy(run);
  return passed ? 0 : 1;
}
