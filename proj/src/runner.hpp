#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "ensemble.hpp"

namespace rtnsim {

// both routes must stay within this on every grid point for the
// validate-unitarity experiment to pass
inline constexpr double kUnitarityTolerance = 1e-6;

struct ResultTable {
  std::string name;           // file stem, e.g. "time_sweep"
  std::string abscissa_name;  // "t_ps" or "tau_ps"
  std::string value_name;     // "fidelity" or "max_defect"
  std::vector<CurveRow> rows;
};

struct RunOutputs {
  std::vector<ResultTable> tables;
  nlohmann::json summary;
  bool pass = true;  // false only when validate-unitarity exceeds tolerance
};

// Runs the configured experiment. Deterministic in (config); n_threads only
// changes the schedule, never the bytes of the results.
RunOutputs execute(const RunConfig& config, int n_threads);

// One line per row, 12 significant digits, '\n' newlines; byte-stable.
std::string csv_text(const ResultTable& table);

// Writes <table>.csv per table plus the <experiment>.json sidecar (version,
// resolved config, summary). Returns the paths written.
std::vector<std::string> write_outputs(const RunConfig& config,
                                       const RunOutputs& outputs,
                                       const std::string& out_dir);

}  // namespace rtnsim
