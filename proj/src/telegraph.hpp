#pragma once

#include <cstdint>
#include <vector>

namespace rtnsim {

enum class RtnMode {
  FormulaPhase,      // single random phase r_d = ln(p); strictly periodic jumps
  FormulaResampled,  // r_d redrawn after each jump; aperiodic jump density
  Markov,            // exponential waits with mean tau (validation mode)
};

struct RtnParams {
  double delta = 0.125;  // jump amplitude, units of a_max
  double tau = 1.0;      // correlation time, ps
  RtnMode mode = RtnMode::FormulaResampled;
  std::uint64_t seed = 0;

  bool operator==(const RtnParams&) const = default;
};

// One realized noise path: value(t) = delta * initial_sign * (-1)^(#jumps <= t),
// right-continuous at jumps.
struct RtnTrajectory {
  int initial_sign = +1;      // +1 or -1
  std::vector<double> jumps;  // strictly increasing, all in (0, horizon)
  double delta = 0.0;
  double horizon = 0.0;
};

// Deterministic in (params.seed, trajectory_index); any order, any thread.
RtnTrajectory sample_trajectory(const RtnParams& params, double horizon,
                                std::uint64_t trajectory_index);

// +/-delta per the jump-count rule; rejects t outside [0, horizon]
double eval_noise(const RtnTrajectory& traj, double t);

}  // namespace rtnsim
