#include "telegraph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "rng.hpp"

namespace rtnsim {

namespace {

constexpr double kPi = std::numbers::pi;

void validate(const RtnParams& params, double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    fail(ErrorCode::InvalidArgument, "rtn: horizon must be > 0");
  }
  if (!(params.tau > 0.0) || !std::isfinite(params.tau)) {
    fail(ErrorCode::InvalidArgument, "rtn: tau must be > 0");
  }
  if (params.delta < 0.0 || !std::isfinite(params.delta)) {
    fail(ErrorCode::InvalidArgument, "rtn: delta must be >= 0");
  }
}

// sign of sin(t/tau - rd) just right of t = 0; sign(0) is +1
int sign_at_origin(double rd) { return std::sin(-rd) < 0.0 ? -1 : +1; }

// smallest zero of sin(t/tau - rd), i.e. t = tau*(k*pi + rd), strictly
// greater than t_from
double next_phase_zero(double tau, double rd, double t_from) {
  long long k =
      static_cast<long long>(std::floor((t_from / tau - rd) / kPi)) + 1;
  double t = tau * (static_cast<double>(k) * kPi + rd);
  while (t <= t_from) t = tau * (static_cast<double>(++k) * kPi + rd);
  return t;
}

}  // namespace

RtnTrajectory sample_trajectory(const RtnParams& params, double horizon,
                                std::uint64_t trajectory_index) {
  validate(params, horizon);
  RngStream rng(params.seed, trajectory_index);
  RtnTrajectory traj;
  traj.delta = params.delta;
  traj.horizon = horizon;

  switch (params.mode) {
    case RtnMode::FormulaPhase: {
      const double rd = std::log(rng.next_open01());
      traj.initial_sign = sign_at_origin(rd);
      double t = 0.0;
      while ((t = next_phase_zero(params.tau, rd, t)) < horizon) {
        traj.jumps.push_back(t);
      }
      break;
    }
    case RtnMode::FormulaResampled: {
      double rd = std::log(rng.next_open01());
      traj.initial_sign = sign_at_origin(rd);
      double t = 0.0;
      while ((t = next_phase_zero(params.tau, rd, t)) < horizon) {
        traj.jumps.push_back(t);
        rd = std::log(rng.next_open01());
      }
      break;
    }
    case RtnMode::Markov: {
      traj.initial_sign = (rng.next_u64() & 1u) ? +1 : -1;
      double t = 0.0;
      for (;;) {
        t += -params.tau * std::log(rng.next_open01());
        if (t >= horizon) break;
        traj.jumps.push_back(t);
      }
      break;
    }
  }
  return traj;
}

double eval_noise(const RtnTrajectory& traj, double t) {
  if (!(t >= 0.0) || t > traj.horizon) {
    fail(ErrorCode::InvalidArgument, "rtn: t outside trajectory horizon");
  }
  const auto flips = std::upper_bound(traj.jumps.begin(), traj.jumps.end(), t) -
                     traj.jumps.begin();
  const int sign = (flips % 2 == 0) ? traj.initial_sign : -traj.initial_sign;
  return traj.delta * static_cast<double>(sign);
}

}  // namespace rtnsim
