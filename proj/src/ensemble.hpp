#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mat2.hpp"
#include "propagator.hpp"
#include "telegraph.hpp"

namespace rtnsim {

// Spin-flip gate: start in |0> (second basis vector, rho0 = diag(0,1)),
// target the Pauli-X image |1> (rho_T = diag(1,0)).
struct GateTarget {
  DensityMatrix2 rho0{0.0, 0.0, 0.0, 1.0};
  DensityMatrix2 rho_target{1.0, 0.0, 0.0, 0.0};
  Mat2 gate = Mat2::pauli_x();

  static GateTarget pauli_x_flip() { return {}; }
};

// Arithmetic mean of U rho0 U', accumulated in index order so the result is
// bit-reproducible. Rejects an empty list.
DensityMatrix2 average_density(std::span<const Unitary2> unitaries,
                               const DensityMatrix2& rho0);

// tr(rho . rho_T), real part (imaginary residue below 1e-12 is discarded);
// equals the |0> -> |1> transfer probability for this target.
double fidelity(const DensityMatrix2& rho, const GateTarget& target);

struct CurveRow {
  double abscissa = 0.0;
  double fidelity = 0.0;
  double std_error = 0.0;
};

struct FidelityCurve {
  std::vector<CurveRow> rows;
  int n_trajectories = 0;
  std::uint64_t master_seed = 0;
};

struct EnsembleParams {
  int n_trajectories = 300;
  std::uint64_t master_seed = 0;
  int n_threads = 0;  // 0 = available parallelism; not part of the config schema

  bool operator==(const EnsembleParams&) const = default;
};

// Propagates every trajectory along the grid (one noise realization per
// trajectory index), averages in index order, and reports the fidelity and
// its Monte-Carlo standard error per grid time. Deterministic in
// (params, ensemble.master_seed) regardless of thread count. Trajectories
// whose disentangled route trips the overflow guard fall back to the exact
// route.
FidelityCurve fidelity_curve(std::span<const AxisPulse> pulses,
                             const RtnParams& rtn, const EnsembleParams& ens,
                             std::span<const double> time_grid,
                             PropagatorMethod method, double substep);

}  // namespace rtnsim
