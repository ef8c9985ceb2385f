#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ensemble.hpp"
#include "propagator.hpp"
#include "sweep.hpp"
#include "telegraph.hpp"

namespace rtnsim {

enum class Experiment { TimeSweep, TauSweep, SequenceScan, ValidateUnitarity };

const char* experiment_name(Experiment e);

struct OutputSpec {
  std::string dir = ".";
  std::string format = "csv";

  bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
  Experiment experiment = Experiment::TimeSweep;
  AxisAssignment pulses;
  RtnParams rtn;  // rtn.seed mirrors ensemble.master_seed
  EnsembleParams ensemble;
  PropagatorMethod method = PropagatorMethod::Disentangle;
  double substep = kDefaultSubstep;
  TimeGridSpec time_grid;
  TauGridSpec tau_grid;
  std::optional<double> gate_time;  // required for tau-sweep
  double optimum_threshold = 0.999;
  OutputSpec output;

  bool operator==(const RunConfig&) const = default;
};

// Strict parse of the documented JSON schema: unknown keys are rejected and
// violations name the offending key path (e.g. "rtn.tau"). Defaults:
// n_trajectories 300, delta 0.125, substep 1e-3, master_seed 0. A sidecar
// written by a previous run (object with "version" and "config") is accepted
// and unwrapped, so outputs re-run as-is.
RunConfig parse_config(const std::string& json_text);

// Canonical full-form JSON; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

}  // namespace rtnsim
