#include "config.hpp"

#include <json.hpp>

#include "errors.hpp"

namespace rtnsim {

using nlohmann::json;

namespace {

[[noreturn]] void fail_parse(const std::string& path, const std::string& what) {
  fail(ErrorCode::Parse, path + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      fail_parse(path.empty() ? item.key() : path + "." + item.key(),
                 "unknown key");
    }
  }
}

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double require_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail_parse(path, "expected a number");
  return v.get<double>();
}

std::string require_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail_parse(path, "expected a string");
  return v.get<std::string>();
}

const json& require_object(const json& v, const std::string& path) {
  if (!v.is_object()) fail_parse(path, "expected an object");
  return v;
}

NamedPulse parse_pulse(const json& v, const std::string& path) {
  if (v.is_string()) {
    const std::string name = v.get<std::string>();
    const PulseSpec* preset = find_preset(name);
    if (!preset) fail_parse(path, "unknown preset '" + name + "'");
    return {name, *preset};
  }
  require_object(v, path);
  check_keys(v, path, {"family", "t0", "r0", "amplitude"});
  const json* family = find(v, "family");
  if (!family) fail_parse(path + ".family", "required");
  const std::string fam = require_string(*family, path + ".family");
  PulseSpec spec;
  if (fam == "cosine") {
    spec.family = PulseFamily::Cosine;
  } else if (fam == "sine") {
    spec.family = PulseFamily::Sine;
  } else {
    fail_parse(path + ".family", "expected 'cosine' or 'sine'");
  }
  const json* t0 = find(v, "t0");
  if (!t0) fail_parse(path + ".t0", "required");
  spec.t0 = require_number(*t0, path + ".t0");
  if (const json* r0 = find(v, "r0")) {
    spec.r0 = require_number(*r0, path + ".r0");
  }
  if (const json* amp = find(v, "amplitude")) {
    spec.amplitude = require_number(*amp, path + ".amplitude");
  }
  try {
    validate_pulse(spec);
  } catch (const SimError& e) {
    fail_parse(path, e.what());
  }
  return {"custom", spec};
}

json emit_pulse(const NamedPulse& pulse) {
  const PulseSpec* preset = find_preset(pulse.name);
  if (preset && *preset == pulse.spec) return pulse.name;
  json v;
  v["family"] = pulse.spec.family == PulseFamily::Cosine ? "cosine" : "sine";
  v["t0"] = pulse.spec.t0;
  v["r0"] = pulse.spec.r0;
  v["amplitude"] = pulse.spec.amplitude;
  return v;
}

}  // namespace

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::TimeSweep: return "time-sweep";
    case Experiment::TauSweep: return "tau-sweep";
    case Experiment::SequenceScan: return "sequence-scan";
    case Experiment::ValidateUnitarity: return "validate-unitarity";
  }
  return "?";
}

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("config: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) fail(ErrorCode::Parse, "config: expected an object");

  // accept a previously written sidecar and re-run its resolved config
  if (root.contains("version") && root.contains("config")) {
    root = require_object(root.at("config"), "config");
  }

  check_keys(root, "",
             {"experiment", "pulses", "rtn", "ensemble", "propagator",
              "time_grid", "tau_grid", "gate_time", "optimum_threshold",
              "output"});

  RunConfig config;

  const json* experiment = find(root, "experiment");
  if (!experiment) fail_parse("experiment", "required");
  const std::string exp = require_string(*experiment, "experiment");
  if (exp == "time-sweep") {
    config.experiment = Experiment::TimeSweep;
  } else if (exp == "tau-sweep") {
    config.experiment = Experiment::TauSweep;
  } else if (exp == "sequence-scan") {
    config.experiment = Experiment::SequenceScan;
  } else if (exp == "validate-unitarity") {
    config.experiment = Experiment::ValidateUnitarity;
  } else {
    fail_parse("experiment",
               "expected one of time-sweep, tau-sweep, sequence-scan, "
               "validate-unitarity");
  }

  if (const json* pulses = find(root, "pulses")) {
    require_object(*pulses, "pulses");
    check_keys(*pulses, "pulses", {"x", "y", "z"});
    if (const json* x = find(*pulses, "x")) config.pulses.x = parse_pulse(*x, "pulses.x");
    if (const json* y = find(*pulses, "y")) config.pulses.y = parse_pulse(*y, "pulses.y");
    if (const json* z = find(*pulses, "z")) config.pulses.z = parse_pulse(*z, "pulses.z");
  }

  if (const json* rtn = find(root, "rtn")) {
    require_object(*rtn, "rtn");
    check_keys(*rtn, "rtn", {"delta", "tau", "mode"});
    if (const json* delta = find(*rtn, "delta")) {
      config.rtn.delta = require_number(*delta, "rtn.delta");
      if (config.rtn.delta < 0.0) fail_parse("rtn.delta", "must be >= 0");
    }
    if (const json* tau = find(*rtn, "tau")) {
      config.rtn.tau = require_number(*tau, "rtn.tau");
      if (!(config.rtn.tau > 0.0)) fail_parse("rtn.tau", "must be > 0");
    }
    if (const json* mode = find(*rtn, "mode")) {
      const std::string m = require_string(*mode, "rtn.mode");
      if (m == "formula-phase") {
        config.rtn.mode = RtnMode::FormulaPhase;
      } else if (m == "formula-resampled") {
        config.rtn.mode = RtnMode::FormulaResampled;
      } else if (m == "markov") {
        config.rtn.mode = RtnMode::Markov;
      } else {
        fail_parse("rtn.mode",
                   "expected one of formula-phase, formula-resampled, markov");
      }
    }
  }

  if (const json* ensemble = find(root, "ensemble")) {
    require_object(*ensemble, "ensemble");
    check_keys(*ensemble, "ensemble", {"n_trajectories", "master_seed"});
    if (const json* n = find(*ensemble, "n_trajectories")) {
      if (!n->is_number_integer() || n->get<long long>() < 1) {
        fail_parse("ensemble.n_trajectories", "must be an integer >= 1");
      }
      config.ensemble.n_trajectories = n->get<int>();
    }
    if (const json* seed = find(*ensemble, "master_seed")) {
      if (!seed->is_number_integer() ||
          (seed->is_number_integer() && !seed->is_number_unsigned() &&
           seed->get<long long>() < 0)) {
        fail_parse("ensemble.master_seed", "must be a non-negative integer");
      }
      config.ensemble.master_seed = seed->get<std::uint64_t>();
    }
  }

  if (const json* propagator = find(root, "propagator")) {
    require_object(*propagator, "propagator");
    check_keys(*propagator, "propagator", {"method", "substep"});
    if (const json* method = find(*propagator, "method")) {
      const std::string m = require_string(*method, "propagator.method");
      if (m == "disentangle") {
        config.method = PropagatorMethod::Disentangle;
      } else if (m == "exact") {
        config.method = PropagatorMethod::Exact;
      } else if (m == "both") {
        config.method = PropagatorMethod::Both;
      } else {
        fail_parse("propagator.method",
                   "expected one of disentangle, exact, both");
      }
    }
    if (const json* substep = find(*propagator, "substep")) {
      config.substep = require_number(*substep, "propagator.substep");
      if (!(config.substep > 0.0)) fail_parse("propagator.substep", "must be > 0");
    }
  }

  if (const json* grid = find(root, "time_grid")) {
    require_object(*grid, "time_grid");
    check_keys(*grid, "time_grid", {"start", "stop", "step"});
    if (const json* v = find(*grid, "start"))
      config.time_grid.start = require_number(*v, "time_grid.start");
    if (const json* v = find(*grid, "stop"))
      config.time_grid.stop = require_number(*v, "time_grid.stop");
    if (const json* v = find(*grid, "step"))
      config.time_grid.step = require_number(*v, "time_grid.step");
    if (config.time_grid.start < 0.0) fail_parse("time_grid.start", "must be >= 0");
    if (!(config.time_grid.step > 0.0)) fail_parse("time_grid.step", "must be > 0");
    if (!(config.time_grid.stop > config.time_grid.start)) {
      fail_parse("time_grid.stop", "must be > start");
    }
  }

  if (const json* grid = find(root, "tau_grid")) {
    require_object(*grid, "tau_grid");
    check_keys(*grid, "tau_grid", {"min", "max", "points"});
    if (const json* v = find(*grid, "min"))
      config.tau_grid.min = require_number(*v, "tau_grid.min");
    if (const json* v = find(*grid, "max"))
      config.tau_grid.max = require_number(*v, "tau_grid.max");
    if (const json* v = find(*grid, "points")) {
      if (!v->is_number_integer() || v->get<long long>() < 1) {
        fail_parse("tau_grid.points", "must be an integer >= 1");
      }
      config.tau_grid.points = v->get<int>();
    }
    if (!(config.tau_grid.min > 0.0)) fail_parse("tau_grid.min", "must be > 0");
    if (!(config.tau_grid.max >= config.tau_grid.min)) {
      fail_parse("tau_grid.max", "must be >= min");
    }
  }

  if (const json* gate_time = find(root, "gate_time")) {
    const double t = require_number(*gate_time, "gate_time");
    if (!(t > 0.0)) fail_parse("gate_time", "must be > 0");
    config.gate_time = t;
  }

  if (const json* threshold = find(root, "optimum_threshold")) {
    config.optimum_threshold = require_number(*threshold, "optimum_threshold");
    if (!(config.optimum_threshold > 0.0) || config.optimum_threshold > 1.0) {
      fail_parse("optimum_threshold", "must be in (0, 1]");
    }
  }

  if (const json* output = find(root, "output")) {
    require_object(*output, "output");
    check_keys(*output, "output", {"dir", "format"});
    if (const json* dir = find(*output, "dir")) {
      config.output.dir = require_string(*dir, "output.dir");
      if (config.output.dir.empty()) fail_parse("output.dir", "must be non-empty");
    }
    if (const json* format = find(*output, "format")) {
      config.output.format = require_string(*format, "output.format");
      if (config.output.format != "csv") {
        fail_parse("output.format", "only 'csv' is supported");
      }
    }
  }

  // experiment-specific requirements
  const bool needs_pulses = config.experiment == Experiment::TimeSweep ||
                            config.experiment == Experiment::TauSweep;
  if (needs_pulses && config.pulses.empty()) {
    fail_parse("pulses", "required for this experiment");
  }
  if (config.experiment == Experiment::SequenceScan && !config.pulses.empty()) {
    fail_parse("pulses",
               "not configurable for sequence-scan (all six preset "
               "assignments are scanned)");
  }
  if (!config.pulses.empty()) {
    try {
      validate_assignment(config.pulses);
    } catch (const SimError& e) {
      fail(ErrorCode::Parse, e.what());
    }
  }
  if (config.experiment == Experiment::TauSweep && !config.gate_time) {
    fail_parse("gate_time", "required for tau-sweep");
  }

  config.rtn.seed = config.ensemble.master_seed;
  return config;
}

std::string emit_config(const RunConfig& config) {
  json root;
  root["experiment"] = experiment_name(config.experiment);
  if (!config.pulses.empty()) {
    json pulses = json::object();
    if (config.pulses.x) pulses["x"] = emit_pulse(*config.pulses.x);
    if (config.pulses.y) pulses["y"] = emit_pulse(*config.pulses.y);
    if (config.pulses.z) pulses["z"] = emit_pulse(*config.pulses.z);
    root["pulses"] = pulses;
  }
  root["rtn"] = {
      {"delta", config.rtn.delta},
      {"tau", config.rtn.tau},
      {"mode", config.rtn.mode == RtnMode::FormulaPhase ? "formula-phase"
               : config.rtn.mode == RtnMode::FormulaResampled
                   ? "formula-resampled"
                   : "markov"},
  };
  root["ensemble"] = {
      {"n_trajectories", config.ensemble.n_trajectories},
      {"master_seed", config.ensemble.master_seed},
  };
  root["propagator"] = {
      {"method", config.method == PropagatorMethod::Disentangle ? "disentangle"
                 : config.method == PropagatorMethod::Exact     ? "exact"
                                                                : "both"},
      {"substep", config.substep},
  };
  root["time_grid"] = {
      {"start", config.time_grid.start},
      {"stop", config.time_grid.stop},
      {"step", config.time_grid.step},
  };
  root["tau_grid"] = {
      {"min", config.tau_grid.min},
      {"max", config.tau_grid.max},
      {"points", config.tau_grid.points},
  };
  if (config.gate_time) root["gate_time"] = *config.gate_time;
  root["optimum_threshold"] = config.optimum_threshold;
  root["output"] = {
      {"dir", config.output.dir},
      {"format", config.output.format},
  };
  return root.dump(2);
}

}  // namespace rtnsim
