#include "runner.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "errors.hpp"
#include "sweep.hpp"
#include "version.hpp"

namespace rtnsim {

using nlohmann::json;

namespace {

std::string format_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

json optima_summary(const FidelityCurve& curve, double threshold) {
  json out;
  out["threshold"] = threshold;
  try {
    out["optimal_times"] = find_optimal_times(curve, threshold);
    out["threshold_cleared"] = true;
  } catch (const SimError& e) {
    if (e.code() != ErrorCode::NoOptimum) throw;
    out["optimal_times"] = json::array();
    out["threshold_cleared"] = false;
  }
  double peak_f = 0.0;
  double peak_t = 0.0;
  for (const CurveRow& row : curve.rows) {
    if (row.fidelity > peak_f) {
      peak_f = row.fidelity;
      peak_t = row.abscissa;
    }
  }
  out["peak_fidelity"] = peak_f;
  out["peak_time"] = peak_t;
  return out;
}

std::string sanitize_stem(std::string s) {
  std::replace(s.begin(), s.end(), '-', '_');
  return s;
}

RunOutputs run_time_sweep(const RunConfig& config, const SweepParams& params) {
  RunOutputs out;
  const std::vector<double> grid = make_grid(config.time_grid);
  const SweepResult res = time_sweep(config.pulses, grid, params);
  out.tables.push_back({"time_sweep", "t_ps", "fidelity", res.curve.rows});
  out.summary = optima_summary(res.curve, config.optimum_threshold);
  out.summary["pulses"] = config.pulses.label();
  return out;
}

RunOutputs run_tau_sweep(const RunConfig& config, const SweepParams& params) {
  RunOutputs out;
  const std::vector<double> taus = make_grid(config.tau_grid);
  const SweepResult res =
      tau_sweep(config.pulses, *config.gate_time, taus, params);
  out.tables.push_back({"tau_sweep", "tau_ps", "fidelity", res.curve.rows});
  double min_f = 1.0;
  double max_f = 0.0;
  for (const CurveRow& row : res.curve.rows) {
    min_f = std::min(min_f, row.fidelity);
    max_f = std::max(max_f, row.fidelity);
  }
  out.summary["pulses"] = config.pulses.label();
  out.summary["gate_time"] = *config.gate_time;
  out.summary["min_fidelity"] = min_f;
  out.summary["max_fidelity"] = max_f;
  return out;
}

RunOutputs run_sequence_scan(const RunConfig& config,
                             const SweepParams& params) {
  RunOutputs out;
  const std::vector<AxisAssignment> sequences = preset_permutations();
  const std::vector<double> taus = make_grid(config.tau_grid);
  const std::vector<SequenceEntry> entries =
      sequence_scan(sequences, config.time_grid, taus, params,
                    config.optimum_threshold);

  out.summary["sequences"] = json::array();
  for (const SequenceEntry& entry : entries) {
    const std::string stem = "seq_" + sanitize_stem(entry.label);
    out.tables.push_back(
        {stem + "_time", "t_ps", "fidelity", entry.time_curve.curve.rows});

    json seq;
    seq["label"] = entry.label;
    seq["optimal_times"] = entry.optimal_times;
    seq["threshold_cleared"] = entry.threshold_cleared;
    seq["peak_fidelity"] = entry.peak_fidelity;
    seq["peak_time"] = entry.peak_time;
    seq["tau_sweeps"] = json::array();
    for (std::size_t i = 0; i < entry.tau_sweeps.size(); ++i) {
      const std::string tau_name = stem + "_tau" + std::to_string(i);
      out.tables.push_back(
          {tau_name, "tau_ps", "fidelity", entry.tau_sweeps[i].curve.rows});
      double min_f = 1.0;
      for (const CurveRow& row : entry.tau_sweeps[i].curve.rows) {
        min_f = std::min(min_f, row.fidelity);
      }
      seq["tau_sweeps"].push_back({{"gate_time", entry.optimal_times[i]},
                                   {"table", tau_name},
                                   {"min_fidelity", min_f}});
    }
    out.summary["sequences"].push_back(seq);
  }
  return out;
}

RunOutputs run_validate_unitarity(const RunConfig& config,
                                  const SweepParams& params) {
  RunOutputs out;
  std::vector<AxisAssignment> assignments;
  if (config.pulses.empty()) {
    assignments.push_back({NamedPulse{"C", presets::C}, {}, {}});
    assignments.push_back({NamedPulse{"QW", presets::QW}, {}, {}});
    assignments.push_back({NamedPulse{"BP", presets::BP}, {}, {}});
  } else {
    assignments.push_back(config.pulses);
  }
  const std::vector<double> grid = make_grid(config.time_grid);

  double max_ud = 0.0;
  double max_dd = 0.0;
  double max_dv = 0.0;
  out.summary["pulses"] = json::array();
  for (const AxisAssignment& assignment : assignments) {
    const UnitarityReport report = validate_unitarity(
        assignment, params.rtn, params.ensemble, grid, params.substep);
    ResultTable table;
    table.name = "validate_unitarity_" + sanitize_stem(report.label);
    table.abscissa_name = "t_ps";
    table.value_name = "max_defect";
    table.rows.resize(report.t.size());
    for (std::size_t i = 0; i < report.t.size(); ++i) {
      const double defect =
          std::max({report.unitarity_defect[i], report.det_defect[i],
                    report.divergence[i]});
      table.rows[i] = {report.t[i], defect, 0.0};
    }
    out.tables.push_back(std::move(table));

    out.summary["pulses"].push_back(
        {{"label", report.label},
         {"max_unitarity_defect", report.max_unitarity_defect},
         {"max_det_defect", report.max_det_defect},
         {"max_route_divergence", report.max_divergence}});
    max_ud = std::max(max_ud, report.max_unitarity_defect);
    max_dd = std::max(max_dd, report.max_det_defect);
    max_dv = std::max(max_dv, report.max_divergence);
  }
  out.summary["max_unitarity_defect"] = max_ud;
  out.summary["max_det_defect"] = max_dd;
  out.summary["max_route_divergence"] = max_dv;
  out.summary["tolerance"] = kUnitarityTolerance;
  out.pass = max_ud <= kUnitarityTolerance && max_dd <= kUnitarityTolerance &&
             max_dv <= kUnitarityTolerance;
  out.summary["pass"] = out.pass;
  return out;
}

}  // namespace

RunOutputs execute(const RunConfig& config, int n_threads) {
  SweepParams params;
  params.rtn = config.rtn;
  params.ensemble = config.ensemble;
  params.ensemble.n_threads = n_threads;
  params.method = config.method;
  params.substep = config.substep;

  RunOutputs out;
  switch (config.experiment) {
    case Experiment::TimeSweep: out = run_time_sweep(config, params); break;
    case Experiment::TauSweep: out = run_tau_sweep(config, params); break;
    case Experiment::SequenceScan: out = run_sequence_scan(config, params); break;
    case Experiment::ValidateUnitarity:
      out = run_validate_unitarity(config, params);
      break;
  }
  out.summary["experiment"] = experiment_name(config.experiment);
  out.summary["n_trajectories"] = config.ensemble.n_trajectories;
  out.summary["master_seed"] = config.ensemble.master_seed;
  return out;
}

std::string csv_text(const ResultTable& table) {
  std::string out = table.abscissa_name + "," + table.value_name + ",stderr\n";
  for (const CurveRow& row : table.rows) {
    out += format_g12(row.abscissa);
    out += ',';
    out += format_g12(row.fidelity);
    out += ',';
    out += format_g12(row.std_error);
    out += '\n';
  }
  return out;
}

std::vector<std::string> write_outputs(const RunConfig& config,
                                       const RunOutputs& outputs,
                                       const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    fail(ErrorCode::Io, "cannot create output directory '" + out_dir +
                            "': " + ec.message());
  }

  const auto write_file = [&](const fs::path& path, const std::string& text) {
    std::ofstream stream(path, std::ios::binary);
    stream << text;
    if (!stream) {
      fail(ErrorCode::Io, "cannot write '" + path.string() + "'");
    }
  };

  std::vector<std::string> written;
  for (const ResultTable& table : outputs.tables) {
    const fs::path path = fs::path(out_dir) / (table.name + ".csv");
    write_file(path, csv_text(table));
    written.push_back(path.string());
  }

  json sidecar;
  sidecar["version"] = kVersionString;
  sidecar["config"] = json::parse(emit_config(config));
  sidecar["summary"] = outputs.summary;
  const fs::path sidecar_path =
      fs::path(out_dir) /
      (sanitize_stem(experiment_name(config.experiment)) + ".json");
  write_file(sidecar_path, sidecar.dump(2) + "\n");
  written.push_back(sidecar_path.string());
  return written;
}

}  // namespace rtnsim
