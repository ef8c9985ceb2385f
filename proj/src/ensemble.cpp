#include "ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"
#include "threadpool.hpp"

namespace rtnsim {

DensityMatrix2 average_density(std::span<const Unitary2> unitaries,
                               const DensityMatrix2& rho0) {
  if (unitaries.empty()) {
    fail(ErrorCode::InvalidArgument, "average_density: empty ensemble");
  }
  Mat2 sum;
  for (const Unitary2& u : unitaries) {
    sum = sum + u * rho0 * u.adjoint();
  }
  return sum * complexd(1.0 / static_cast<double>(unitaries.size()), 0.0);
}

double fidelity(const DensityMatrix2& rho, const GateTarget& target) {
  // clamp the ~1e-16 excursions left by numerically almost-unitary inputs
  return std::clamp((rho * target.rho_target).trace().real(), 0.0, 1.0);
}

FidelityCurve fidelity_curve(std::span<const AxisPulse> pulses,
                             const RtnParams& rtn, const EnsembleParams& ens,
                             std::span<const double> time_grid,
                             PropagatorMethod method, double substep) {
  if (time_grid.empty()) {
    fail(ErrorCode::InvalidArgument, "fidelity_curve: empty time grid");
  }
  for (std::size_t i = 0; i < time_grid.size(); ++i) {
    if (i > 0 && !(time_grid[i - 1] < time_grid[i])) {
      fail(ErrorCode::InvalidArgument,
           "fidelity_curve: time grid must be strictly increasing");
    }
  }
  if (time_grid.front() < 0.0) {
    fail(ErrorCode::InvalidArgument, "fidelity_curve: times must be >= 0");
  }
  if (ens.n_trajectories < 1) {
    fail(ErrorCode::InvalidArgument,
         "fidelity_curve: n_trajectories must be >= 1");
  }

  const int n = ens.n_trajectories;
  const std::size_t grid_size = time_grid.size();
  FidelityCurve curve;
  curve.n_trajectories = n;
  curve.master_seed = ens.master_seed;

  // U(0) = I for every trajectory, so a lone t = 0 grid needs no propagation.
  if (time_grid.back() == 0.0) {
    curve.rows.push_back({0.0, 0.0, 0.0});
    return curve;
  }

  RtnParams keyed = rtn;
  keyed.seed = ens.master_seed;
  const double horizon = time_grid.back();

  std::vector<double> flip(static_cast<std::size_t>(n) * grid_size);
  parallel_for_indexed(n, ens.n_threads, [&](int k) {
    try {
      const RtnTrajectory traj =
          sample_trajectory(keyed, horizon, static_cast<std::uint64_t>(k));
      const PiecewiseDrive drive = build_drive(pulses, &traj, horizon);
      std::vector<Unitary2> us;
      try {
        us = propagate_samples(drive, time_grid, method, substep);
      } catch (const SimError& e) {
        if (e.code() != ErrorCode::Overflow ||
            method != PropagatorMethod::Disentangle) {
          throw;
        }
        us = propagate_samples(drive, time_grid, PropagatorMethod::Exact,
                               substep);
      }
      for (std::size_t i = 0; i < grid_size; ++i) {
        flip[static_cast<std::size_t>(k) * grid_size + i] =
            std::norm(us[i].m12);
      }
    } catch (const SimError& e) {
      throw SimError(e.code(), std::string(e.what()) + " (trajectory " +
                                   std::to_string(k) + ")");
    }
  });

  curve.rows.resize(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      sum += flip[static_cast<std::size_t>(k) * grid_size + i];
    }
    const double mean =
        std::clamp(sum / static_cast<double>(n), 0.0, 1.0);
    double se = 0.0;
    if (n > 1) {
      double ss = 0.0;
      for (int k = 0; k < n; ++k) {
        const double d = flip[static_cast<std::size_t>(k) * grid_size + i] - mean;
        ss += d * d;
      }
      se = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    }
    curve.rows[i] = {time_grid[i], mean, se};
  }
  return curve;
}

}  // namespace rtnsim
