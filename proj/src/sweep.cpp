#include "sweep.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "threadpool.hpp"

namespace rtnsim {

namespace {

// Vertex of the parabola through three points; falls back to x1 when the
// points are collinear. Clamped to [x0, x2].
double refine_quadratic(double x0, double y0, double x1, double y1, double x2,
                        double y2) {
  const double num =
      (x1 - x0) * (x1 - x0) * (y1 - y2) - (x1 - x2) * (x1 - x2) * (y1 - y0);
  const double den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
  if (std::abs(den) < 1e-300) return x1;
  const double vertex = x1 - 0.5 * num / den;
  return std::clamp(vertex, x0, x2);
}

double refine_at(const std::vector<CurveRow>& rows, std::size_t i) {
  if (i == 0 || i + 1 >= rows.size()) return rows[i].abscissa;
  return refine_quadratic(rows[i - 1].abscissa, rows[i - 1].fidelity,
                          rows[i].abscissa, rows[i].fidelity,
                          rows[i + 1].abscissa, rows[i + 1].fidelity);
}

}  // namespace

std::string AxisAssignment::label() const {
  std::string out;
  for (const auto& p : {x, y, z}) {
    if (!p) continue;
    if (!out.empty()) out += '-';
    out += p->name;
  }
  return out;
}

std::vector<AxisPulse> AxisAssignment::axis_pulses() const {
  std::vector<AxisPulse> out;
  if (x) out.push_back({x->spec, Axis::X});
  if (y) out.push_back({y->spec, Axis::Y});
  if (z) out.push_back({z->spec, Axis::Z});
  return out;
}

void validate_assignment(const AxisAssignment& assignment) {
  if (assignment.empty()) {
    fail(ErrorCode::InvalidArgument, "pulses: at least one axis must be assigned");
  }
  const std::optional<NamedPulse>* slots[3] = {&assignment.x, &assignment.y,
                                               &assignment.z};
  for (int i = 0; i < 3; ++i) {
    if (*slots[i]) validate_pulse((*slots[i])->spec);
    for (int j = i + 1; j < 3; ++j) {
      if (*slots[i] && *slots[j] && (*slots[i])->spec == (*slots[j])->spec) {
        fail(ErrorCode::InvalidArgument,
             "pulses: pulse '" + (*slots[i])->name + "' used on two axes");
      }
    }
  }
}

std::vector<double> make_grid(const TimeGridSpec& spec) {
  if (!(spec.step > 0.0)) {
    fail(ErrorCode::InvalidArgument, "time_grid.step: must be > 0");
  }
  if (spec.start < 0.0) {
    fail(ErrorCode::InvalidArgument, "time_grid.start: must be >= 0");
  }
  if (!(spec.stop > spec.start)) {
    fail(ErrorCode::InvalidArgument, "time_grid.stop: must be > start");
  }
  const auto count = static_cast<std::size_t>(
      std::floor((spec.stop - spec.start) / spec.step + 1e-9));
  std::vector<double> grid(count + 1);
  for (std::size_t i = 0; i <= count; ++i) {
    grid[i] = spec.start + static_cast<double>(i) * spec.step;
  }
  return grid;
}

std::vector<double> make_grid(const TauGridSpec& spec) {
  if (!(spec.min > 0.0)) {
    fail(ErrorCode::InvalidArgument, "tau_grid.min: must be > 0");
  }
  if (!(spec.max >= spec.min)) {
    fail(ErrorCode::InvalidArgument, "tau_grid.max: must be >= min");
  }
  if (spec.points < 1) {
    fail(ErrorCode::InvalidArgument, "tau_grid.points: must be >= 1");
  }
  if (spec.points == 1 || spec.max == spec.min) {
    return {spec.min};
  }
  std::vector<double> grid(static_cast<std::size_t>(spec.points));
  const double lmin = std::log(spec.min);
  const double lmax = std::log(spec.max);
  for (int j = 0; j < spec.points; ++j) {
    grid[static_cast<std::size_t>(j)] =
        std::exp(lmin + (lmax - lmin) * static_cast<double>(j) /
                            static_cast<double>(spec.points - 1));
  }
  grid.front() = spec.min;
  grid.back() = spec.max;
  return grid;
}

SweepResult time_sweep(const AxisAssignment& assignment,
                       std::span<const double> time_grid,
                       const SweepParams& params) {
  validate_assignment(assignment);
  const std::vector<AxisPulse> pulses = assignment.axis_pulses();
  SweepResult out;
  out.kind = SweepKind::TimeSweep;
  out.curve = fidelity_curve(pulses, params.rtn, params.ensemble, time_grid,
                             params.method, params.substep);
  return out;
}

SweepResult tau_sweep(const AxisAssignment& assignment, double gate_time,
                      std::span<const double> taus, const SweepParams& params) {
  validate_assignment(assignment);
  if (!(gate_time > 0.0)) {
    fail(ErrorCode::InvalidArgument, "tau_sweep: gate_time must be > 0");
  }
  if (taus.empty()) {
    fail(ErrorCode::InvalidArgument, "tau_sweep: empty tau grid");
  }
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!(taus[i] > 0.0) || (i > 0 && !(taus[i - 1] < taus[i]))) {
      fail(ErrorCode::InvalidArgument,
           "tau_sweep: tau grid must be positive and increasing");
    }
  }

  const std::vector<AxisPulse> pulses = assignment.axis_pulses();
  SweepResult out;
  out.kind = SweepKind::TauSweep;
  out.curve.n_trajectories = params.ensemble.n_trajectories;
  out.curve.master_seed = params.ensemble.master_seed;
  out.curve.rows.reserve(taus.size());
  for (double tau : taus) {
    RtnParams rtn = params.rtn;
    rtn.tau = tau;
    const double grid[1] = {gate_time};
    try {
      const FidelityCurve point = fidelity_curve(
          pulses, rtn, params.ensemble, grid, params.method, params.substep);
      out.curve.rows.push_back(
          {tau, point.rows[0].fidelity, point.rows[0].std_error});
    } catch (const SimError& e) {
      throw SimError(e.code(), std::string(e.what()) +
                                   " (tau = " + std::to_string(tau) + ")");
    }
  }
  return out;
}

std::vector<double> find_optimal_times(const FidelityCurve& curve,
                                       double threshold) {
  if (curve.rows.empty()) {
    fail(ErrorCode::InvalidArgument, "find_optimal_times: empty curve");
  }
  if (!(threshold > 0.0) || threshold > 1.0) {
    fail(ErrorCode::InvalidArgument,
         "find_optimal_times: threshold must be in (0, 1]");
  }
  const auto& rows = curve.rows;
  std::vector<double> optima;
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    const double f = rows[i].fidelity;
    if (f < threshold) continue;
    // strict rise into the maximum keeps plateaus from double-reporting
    if (rows[i - 1].fidelity < f && f >= rows[i + 1].fidelity) {
      optima.push_back(refine_at(rows, i));
    }
  }
  if (optima.empty()) {
    fail(ErrorCode::NoOptimum,
         "find_optimal_times: no local maximum clears the threshold");
  }
  return optima;
}

std::vector<AxisAssignment> preset_permutations() {
  const NamedPulse c{"C", presets::C};
  const NamedPulse qw{"QW", presets::QW};
  const NamedPulse bp{"BP", presets::BP};
  std::vector<NamedPulse> order{bp, c, qw};
  std::sort(order.begin(), order.end(),
            [](const NamedPulse& a, const NamedPulse& b) { return a.name < b.name; });
  std::vector<AxisAssignment> out;
  do {
    out.push_back({order[0], order[1], order[2]});
  } while (std::next_permutation(
      order.begin(), order.end(),
      [](const NamedPulse& a, const NamedPulse& b) { return a.name < b.name; }));
  return out;
}

std::vector<SequenceEntry> sequence_scan(
    std::span<const AxisAssignment> sequences, const TimeGridSpec& time_grid,
    std::span<const double> taus, const SweepParams& params,
    double optimum_threshold) {
  if (sequences.empty()) {
    fail(ErrorCode::InvalidArgument, "sequence_scan: no sequences given");
  }
  const std::vector<double> grid = make_grid(time_grid);
  std::vector<SequenceEntry> out;
  out.reserve(sequences.size());
  for (const AxisAssignment& assignment : sequences) {
    SequenceEntry entry;
    entry.assignment = assignment;
    entry.label = assignment.label();
    entry.time_curve = time_sweep(assignment, grid, params);

    const auto& rows = entry.time_curve.curve.rows;
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].fidelity > rows[best].fidelity) best = i;
    }
    entry.peak_fidelity = rows[best].fidelity;
    entry.peak_time = rows[best].abscissa;

    try {
      entry.optimal_times =
          find_optimal_times(entry.time_curve.curve, optimum_threshold);
    } catch (const SimError& e) {
      if (e.code() != ErrorCode::NoOptimum) throw;
      entry.threshold_cleared = false;
      entry.optimal_times = {refine_at(rows, best)};
    }

    for (double t_opt : entry.optimal_times) {
      entry.tau_sweeps.push_back(tau_sweep(assignment, t_opt, taus, params));
    }
    out.push_back(std::move(entry));
  }
  return out;
}

UnitarityReport validate_unitarity(const AxisAssignment& assignment,
                                   const RtnParams& rtn,
                                   const EnsembleParams& ens,
                                   std::span<const double> time_grid,
                                   double substep) {
  validate_assignment(assignment);
  if (time_grid.empty() || !(time_grid.back() > 0.0)) {
    fail(ErrorCode::InvalidArgument,
         "validate_unitarity: time grid must reach past 0");
  }
  const std::vector<AxisPulse> pulses = assignment.axis_pulses();
  const double horizon = time_grid.back();
  const std::size_t grid_size = time_grid.size();
  const int n = ens.n_trajectories;

  RtnParams keyed = rtn;
  keyed.seed = ens.master_seed;

  // per-trajectory defect rows; max-reduced afterwards (order-independent)
  std::vector<double> ud(static_cast<std::size_t>(n) * grid_size, 0.0);
  std::vector<double> dd(static_cast<std::size_t>(n) * grid_size, 0.0);
  std::vector<double> dv(static_cast<std::size_t>(n) * grid_size, 0.0);
  parallel_for_indexed(n, ens.n_threads, [&](int k) {
    const RtnTrajectory traj =
        sample_trajectory(keyed, horizon, static_cast<std::uint64_t>(k));
    const PiecewiseDrive drive = build_drive(pulses, &traj, horizon);
    const std::vector<Unitary2> dis = propagate_samples(
        drive, time_grid, PropagatorMethod::Disentangle, substep);
    const std::vector<Unitary2> exact =
        propagate_samples(drive, time_grid, PropagatorMethod::Exact, substep);
    for (std::size_t i = 0; i < grid_size; ++i) {
      const std::size_t slot = static_cast<std::size_t>(k) * grid_size + i;
      ud[slot] = std::max(unitarity_defect(dis[i]), unitarity_defect(exact[i]));
      dd[slot] = std::max(det_defect(dis[i]), det_defect(exact[i]));
      dv[slot] = max_abs_diff(dis[i], exact[i]);
    }
  });

  UnitarityReport report;
  report.label = assignment.label();
  report.t.assign(time_grid.begin(), time_grid.end());
  report.unitarity_defect.assign(grid_size, 0.0);
  report.det_defect.assign(grid_size, 0.0);
  report.divergence.assign(grid_size, 0.0);
  for (int k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < grid_size; ++i) {
      const std::size_t slot = static_cast<std::size_t>(k) * grid_size + i;
      report.unitarity_defect[i] = std::max(report.unitarity_defect[i], ud[slot]);
      report.det_defect[i] = std::max(report.det_defect[i], dd[slot]);
      report.divergence[i] = std::max(report.divergence[i], dv[slot]);
    }
  }
  for (std::size_t i = 0; i < grid_size; ++i) {
    report.max_unitarity_defect =
        std::max(report.max_unitarity_defect, report.unitarity_defect[i]);
    report.max_det_defect = std::max(report.max_det_defect, report.det_defect[i]);
    report.max_divergence = std::max(report.max_divergence, report.divergence[i]);
  }
  return report;
}

}  // namespace rtnsim
