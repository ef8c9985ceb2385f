#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ensemble.hpp"
#include "propagator.hpp"

namespace rtnsim {

struct NamedPulse {
  std::string name;  // "C", "QW", "BP", or "custom"
  PulseSpec spec;

  bool operator==(const NamedPulse&) const = default;
};

// Which pulse drives which axis. The label lists the x, y, z pulses in order
// ("BP-C-QW" means BP on x, C on y, QW on z).
struct AxisAssignment {
  std::optional<NamedPulse> x;
  std::optional<NamedPulse> y;
  std::optional<NamedPulse> z;

  bool operator==(const AxisAssignment&) const = default;

  std::string label() const;
  std::vector<AxisPulse> axis_pulses() const;
  bool empty() const { return !x && !y && !z; }
};

// at least one axis assigned; the same pulse may not drive two axes
void validate_assignment(const AxisAssignment& assignment);

struct TimeGridSpec {
  double start = 0.0;
  double stop = 12.0;
  double step = 0.01;

  bool operator==(const TimeGridSpec&) const = default;
};

struct TauGridSpec {
  double min = 1e-3;
  double max = 20.0;
  int points = 40;  // logarithmically spaced

  bool operator==(const TauGridSpec&) const = default;
};

std::vector<double> make_grid(const TimeGridSpec& spec);
std::vector<double> make_grid(const TauGridSpec& spec);

enum class SweepKind { TimeSweep, TauSweep, SequenceScan };

struct SweepResult {
  SweepKind kind = SweepKind::TimeSweep;
  FidelityCurve curve;
};

struct SweepParams {
  RtnParams rtn;
  EnsembleParams ensemble;
  PropagatorMethod method = PropagatorMethod::Disentangle;
  double substep = kDefaultSubstep;
};

// Fidelity along the time grid for one assignment.
SweepResult time_sweep(const AxisAssignment& assignment,
                       std::span<const double> time_grid,
                       const SweepParams& params);

// Fidelity at a fixed gate time for each RTN correlation time.
SweepResult tau_sweep(const AxisAssignment& assignment, double gate_time,
                      std::span<const double> taus, const SweepParams& params);

// All local maxima with fidelity >= threshold, each refined by quadratic
// interpolation on its three-point neighborhood, in increasing time.
// Throws NoOptimum when nothing clears the threshold.
std::vector<double> find_optimal_times(const FidelityCurve& curve,
                                       double threshold);

struct SequenceEntry {
  AxisAssignment assignment;
  std::string label;
  SweepResult time_curve;
  std::vector<double> optimal_times;
  bool threshold_cleared = true;  // false: optimal_times fell back to argmax
  double peak_fidelity = 0.0;
  double peak_time = 0.0;
  std::vector<SweepResult> tau_sweeps;  // one per optimal time
};

// The six assignments of {C, QW, BP} onto (x, y, z).
std::vector<AxisAssignment> preset_permutations();

// For each sequence: time-domain curve with RTN on z, optimal-time
// extraction, then a tau sweep at every optimum.
std::vector<SequenceEntry> sequence_scan(
    std::span<const AxisAssignment> sequences, const TimeGridSpec& time_grid,
    std::span<const double> taus, const SweepParams& params,
    double optimum_threshold);

struct UnitarityReport {
  std::string label;
  std::vector<double> t;
  // per grid time, maxima over both routes and all trajectories
  std::vector<double> unitarity_defect;
  std::vector<double> det_defect;
  std::vector<double> divergence;  // disentangled vs exact, entrywise
  double max_unitarity_defect = 0.0;
  double max_det_defect = 0.0;
  double max_divergence = 0.0;
};

// Drives both propagators over the grid for every trajectory and reports the
// worst unitarity defect, |det - 1|, and route divergence.
UnitarityReport validate_unitarity(const AxisAssignment& assignment,
                                   const RtnParams& rtn,
                                   const EnsembleParams& ens,
                                   std::span<const double> time_grid,
                                   double substep);

}  // namespace rtnsim
