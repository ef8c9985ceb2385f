#include <rtnsim/rtnsim.h>

#include <cstring>
#include <memory>
#include <string>

#include "config.hpp"
#include "errors.hpp"
#include "runner.hpp"
#include "version.hpp"

using namespace rtnsim;

struct rtnsim_run {
  RunConfig config;
  RunOutputs outputs;
  bool executed = false;
  int n_threads = 0;
  std::string config_json;
  mutable std::string summary_json;
};

namespace {

thread_local char tl_error[512] = "";

void set_error(const char* msg) {
  std::strncpy(tl_error, msg, sizeof(tl_error) - 1);
  tl_error[sizeof(tl_error) - 1] = '\0';
}

int status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return RTNSIM_ERR_INVALID_ARGUMENT;
    case ErrorCode::Parse: return RTNSIM_ERR_PARSE;
    case ErrorCode::Overflow: return RTNSIM_ERR_OVERFLOW;
    case ErrorCode::NonFinite: return RTNSIM_ERR_NONFINITE;
    case ErrorCode::NoOptimum: return RTNSIM_ERR_NO_OPTIMUM;
    case ErrorCode::Diverged: return RTNSIM_ERR_DIVERGED;
    case ErrorCode::Io: return RTNSIM_ERR_IO;
    case ErrorCode::Internal: return RTNSIM_ERR_INTERNAL;
  }
  return RTNSIM_ERR_INTERNAL;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    tl_error[0] = '\0';
    return RTNSIM_OK;
  } catch (const SimError& e) {
    set_error(e.what());
    return status_of(e.code());
  } catch (const std::exception& e) {
    set_error(e.what());
    return RTNSIM_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return RTNSIM_ERR_INTERNAL;
  }
}

int require(bool ok, const char* msg) {
  if (ok) return RTNSIM_OK;
  set_error(msg);
  return RTNSIM_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

void rtnsim_version(int* major, int* minor, int* patch) {
  if (major) *major = kVersionMajor;
  if (minor) *minor = kVersionMinor;
  if (patch) *patch = kVersionPatch;
}

const char* rtnsim_status_name(int status) {
  switch (status) {
    case RTNSIM_OK: return "ok";
    case RTNSIM_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case RTNSIM_ERR_PARSE: return "parse";
    case RTNSIM_ERR_OVERFLOW: return "overflow";
    case RTNSIM_ERR_NONFINITE: return "non-finite";
    case RTNSIM_ERR_NO_OPTIMUM: return "no-optimum";
    case RTNSIM_ERR_DIVERGED: return "diverged";
    case RTNSIM_ERR_IO: return "io";
    case RTNSIM_ERR_INTERNAL: return "internal";
  }
  return "?";
}

const char* rtnsim_last_error(void) { return tl_error; }

int rtnsim_run_create(const char* config_json, rtnsim_run** out_run) {
  if (int rc = require(out_run != nullptr, "out_run is null")) return rc;
  *out_run = nullptr;
  if (int rc = require(config_json != nullptr, "config_json is null")) return rc;
  return guarded([&] {
    auto run = std::make_unique<rtnsim_run>();
    run->config = parse_config(config_json);
    run->config_json = emit_config(run->config);
    *out_run = run.release();
  });
}

void rtnsim_run_destroy(rtnsim_run* run) { delete run; }

int rtnsim_run_set_seed(rtnsim_run* run, uint64_t master_seed) {
  if (int rc = require(run != nullptr, "run is null")) return rc;
  run->config.ensemble.master_seed = master_seed;
  run->config.rtn.seed = master_seed;
  run->config_json = emit_config(run->config);
  run->executed = false;
  return RTNSIM_OK;
}

int rtnsim_run_set_threads(rtnsim_run* run, int n_threads) {
  if (int rc = require(run != nullptr, "run is null")) return rc;
  run->n_threads = n_threads;
  return RTNSIM_OK;
}

int rtnsim_run_execute(rtnsim_run* run) {
  if (int rc = require(run != nullptr, "run is null")) return rc;
  return guarded([&] {
    run->outputs = execute(run->config, run->n_threads);
    run->executed = true;
  });
}

int rtnsim_run_passed(const rtnsim_run* run, int* out_passed) {
  if (int rc = require(run != nullptr, "run is null")) return rc;
  if (int rc = require(out_passed != nullptr, "out_passed is null")) return rc;
  if (int rc = require(run->executed, "run not executed")) return rc;
  *out_passed = run->outputs.pass ? 1 : 0;
  return RTNSIM_OK;
}

int rtnsim_run_table_count(const rtnsim_run* run, int* out_count) {
  if (int rc = require(run != nullptr, "run is null")) return rc;
  if (int rc = require(out_count != nullptr, "out_count is null")) return rc;
  if (int rc = require(run->executed, "run not executed")) return rc;
  *out_count = static_cast<int>(run->outputs.tables.size());
  return RTNSIM_OK;
}

const char* rtnsim_run_table_name(const rtnsim_run* run, int table) {
  if (!run || !run->executed || table < 0 ||
      table >= static_cast<int>(run->outputs.tables.size())) {
    return nullptr;
  }
  return run->outputs.tables[static_cast<std::size_t>(table)].name.c_str();
}

int rtnsim_run_row_count(const rtnsim_run* run, int table, int* out_count) {
  if (int rc = require(run != nullptr, "run is null")) return rc;
  if (int rc = require(out_count != nullptr, "out_count is null")) return rc;
  if (int rc = require(run->executed, "run not executed")) return rc;
  if (int rc = require(table >= 0 && table < static_cast<int>(
                                                 run->outputs.tables.size()),
                       "table index out of range")) {
    return rc;
  }
  *out_count = static_cast<int>(
      run->outputs.tables[static_cast<std::size_t>(table)].rows.size());
  return RTNSIM_OK;
}

int rtnsim_run_row(const rtnsim_run* run, int table, int row,
                   double* out_abscissa, double* out_value,
                   double* out_stderr) {
  if (int rc = require(run != nullptr, "run is null")) return rc;
  if (int rc = require(run->executed, "run not executed")) return rc;
  if (int rc = require(table >= 0 && table < static_cast<int>(
                                                 run->outputs.tables.size()),
                       "table index out of range")) {
    return rc;
  }
  const auto& rows = run->outputs.tables[static_cast<std::size_t>(table)].rows;
  if (int rc = require(row >= 0 && row < static_cast<int>(rows.size()),
                       "row index out of range")) {
    return rc;
  }
  const CurveRow& r = rows[static_cast<std::size_t>(row)];
  if (out_abscissa) *out_abscissa = r.abscissa;
  if (out_value) *out_value = r.fidelity;
  if (out_stderr) *out_stderr = r.std_error;
  return RTNSIM_OK;
}

const char* rtnsim_run_config_json(const rtnsim_run* run) {
  return run ? run->config_json.c_str() : nullptr;
}

const char* rtnsim_run_summary_json(const rtnsim_run* run) {
  if (!run || !run->executed) return nullptr;
  run->summary_json = run->outputs.summary.dump(2);
  return run->summary_json.c_str();
}

int rtnsim_run_write_outputs(rtnsim_run* run, const char* out_dir) {
  if (int rc = require(run != nullptr, "run is null")) return rc;
  if (int rc = require(out_dir != nullptr, "out_dir is null")) return rc;
  if (int rc = require(run->executed, "run not executed")) return rc;
  return guarded([&] { write_outputs(run->config, run->outputs, out_dir); });
}

}  // extern "C"
