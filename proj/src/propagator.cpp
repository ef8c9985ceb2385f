#include "propagator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"

namespace rtnsim {

namespace {

// Chart restart thresholds. Kept small so RK4 never integrates near the
// alpha pole: local error grows like substep^5 * |alpha|^6.
constexpr double kRestartCoordinate = 3.0;
constexpr double kRestartReBeta = 2.5;

bool finite_c(complexd z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// exp(-i (b . sigma / 2) dt) in closed form
Mat2 segment_exponential(const DriveSample& d, double dt) {
  const double bx = d.a_x;
  const double by = d.a_y;
  const double bz = d.a_z + d.eta_z;
  const double norm = std::sqrt(bx * bx + by * by + bz * bz);
  if (norm == 0.0 || dt == 0.0) return Mat2::identity();
  const double phi = 0.5 * norm * dt;
  const double c = std::cos(phi);
  const double s = std::sin(phi) / norm;
  return {complexd(c, -s * bz), complexd(-s * by, -s * bx),
          complexd(s * by, -s * bx), complexd(c, s * bz)};
}

struct ExactState {
  Mat2 u = Mat2::identity();

  void advance(const DriveSample& d, double dt) {
    u = segment_exponential(d, dt) * u;
  }
};

struct ChartState {
  complexd alpha{0.0}, beta{0.0}, gamma{0.0};
  Mat2 folded = Mat2::identity();
  bool restarted = false;

  Mat2 unitary() const {
    return assemble_unitary({alpha, beta, gamma, 0.0}) * folded;
  }

  void fold() {
    folded = assemble_unitary({alpha, beta, gamma, 0.0}) * folded;
    alpha = beta = gamma = complexd(0.0);
    restarted = true;
  }

  void advance(const DriveSample& d, double len, double substep) {
    if (len <= 0.0) return;
    const complexd i_unit(0.0, 1.0);
    const complexd hp = 0.5 * complexd(d.a_x, -d.a_y);
    const complexd hm = 0.5 * complexd(d.a_x, d.a_y);
    const complexd hz(d.a_z + d.eta_z, 0.0);
    const auto rhs = [&](complexd a, complexd b, complexd& da, complexd& db,
                         complexd& dg) {
      da = -i_unit * (hp + hz * a - hm * a * a);
      db = -i_unit * (hz - 2.0 * hm * a);
      dg = -i_unit * (hm * std::exp(b));
    };

    const int n = std::max(1, static_cast<int>(std::ceil(len / substep)));
    const double h = len / n;
    for (int k = 0; k < n; ++k) {
      complexd da1, db1, dg1, da2, db2, dg2, da3, db3, dg3, da4, db4, dg4;
      rhs(alpha, beta, da1, db1, dg1);
      rhs(alpha + 0.5 * h * da1, beta + 0.5 * h * db1, da2, db2, dg2);
      rhs(alpha + 0.5 * h * da2, beta + 0.5 * h * db2, da3, db3, dg3);
      rhs(alpha + h * da3, beta + h * db3, da4, db4, dg4);
      alpha += (h / 6.0) * (da1 + 2.0 * da2 + 2.0 * da3 + da4);
      beta += (h / 6.0) * (db1 + 2.0 * db2 + 2.0 * db3 + db4);
      gamma += (h / 6.0) * (dg1 + 2.0 * dg2 + 2.0 * dg3 + dg4);
      if (!finite_c(alpha) || !finite_c(beta) || !finite_c(gamma)) {
        fail(ErrorCode::NonFinite,
             "propagate: disentangling coordinates left the finite range");
      }
      if (std::abs(alpha) > kRestartCoordinate ||
          std::abs(gamma) > kRestartCoordinate ||
          std::abs(beta.real()) > kRestartReBeta) {
        fold();
      }
    }
  }
};

void check_substep(double substep) {
  if (!(substep > 0.0) || !std::isfinite(substep)) {
    fail(ErrorCode::InvalidArgument, "propagate: substep must be > 0");
  }
}

void check_drive(const PiecewiseDrive& drive) {
  if (drive.edges.size() < 2 || drive.values.size() + 1 != drive.edges.size()) {
    fail(ErrorCode::InvalidArgument, "propagate: malformed drive");
  }
  if (drive.edges.front() != 0.0) {
    fail(ErrorCode::InvalidArgument, "propagate: drive must start at t = 0");
  }
  for (std::size_t i = 0; i + 1 < drive.edges.size(); ++i) {
    if (!(drive.edges[i] < drive.edges[i + 1])) {
      fail(ErrorCode::InvalidArgument,
           "propagate: drive edges must be strictly increasing");
    }
  }
  for (const DriveSample& v : drive.values) {
    if (!std::isfinite(v.a_x) || !std::isfinite(v.a_y) ||
        !std::isfinite(v.a_z) || !std::isfinite(v.eta_z)) {
      fail(ErrorCode::InvalidArgument, "propagate: drive must be finite");
    }
  }
}

void check_times(const PiecewiseDrive& drive, std::span<const double> times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0 && !(times[i - 1] < times[i])) {
      fail(ErrorCode::InvalidArgument,
           "propagate: sample times must be strictly increasing");
    }
  }
  if (!times.empty() && (times.front() < 0.0 || times.back() > drive.t_end())) {
    fail(ErrorCode::InvalidArgument,
         "propagate: sample times must lie within [0, t_end]");
  }
}

// Walks the drive, advancing one or both routes and emitting snapshots at the
// sample times.
template <typename Emit>
void walk(const PiecewiseDrive& drive, std::span<const double> times,
          double substep, ChartState* chart, ExactState* exact,
          const Emit& emit) {
  std::size_t si = 0;
  const auto advance_to = [&](double from, double to, const DriveSample& v) {
    if (to <= from) return;
    if (chart) chart->advance(v, to - from, substep);
    if (exact) exact->advance(v, to - from);
  };
  while (si < times.size() && times[si] == 0.0) emit(si++);
  double cur = 0.0;
  for (std::size_t seg = 0; seg < drive.values.size(); ++seg) {
    const double seg_end = drive.edges[seg + 1];
    const DriveSample& v = drive.values[seg];
    while (si < times.size() && times[si] <= seg_end) {
      advance_to(cur, times[si], v);
      cur = times[si];
      emit(si++);
    }
    advance_to(cur, seg_end, v);
    cur = seg_end;
  }
}

}  // namespace

PiecewiseDrive build_drive(std::span<const AxisPulse> pulses,
                           const RtnTrajectory* noise, double t_end) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    fail(ErrorCode::InvalidArgument, "propagate: t_end must be > 0");
  }
  for (const AxisPulse& p : pulses) validate_pulse(p.pulse);
  if (noise && t_end > noise->horizon) {
    fail(ErrorCode::InvalidArgument,
         "propagate: t_end exceeds the noise trajectory horizon");
  }

  PiecewiseDrive drive;
  drive.edges.push_back(0.0);
  drive.edges.push_back(t_end);
  for (const AxisPulse& p : pulses) {
    for (double t : jump_times(p.pulse, t_end)) drive.edges.push_back(t);
  }
  if (noise) {
    for (double t : noise->jumps) {
      if (t < t_end) drive.edges.push_back(t);
    }
  }
  std::sort(drive.edges.begin(), drive.edges.end());
  drive.edges.erase(std::unique(drive.edges.begin(), drive.edges.end()),
                    drive.edges.end());

  drive.values.resize(drive.edges.size() - 1);
  for (std::size_t i = 0; i + 1 < drive.edges.size(); ++i) {
    const double mid = 0.5 * (drive.edges[i] + drive.edges[i + 1]);
    DriveSample v;
    for (const AxisPulse& p : pulses) {
      const double a = eval_pulse(p.pulse, mid);
      switch (p.axis) {
        case Axis::X: v.a_x += a; break;
        case Axis::Y: v.a_y += a; break;
        case Axis::Z: v.a_z += a; break;
      }
    }
    if (noise) v.eta_z = eval_noise(*noise, mid);
    drive.values[i] = v;
  }
  return drive;
}

std::array<complexd, 3> riccati_rhs(const DisentangleState& state,
                                    const DriveSample& drive) {
  const complexd i_unit(0.0, 1.0);
  const complexd hp = 0.5 * complexd(drive.a_x, -drive.a_y);
  const complexd hm = 0.5 * complexd(drive.a_x, drive.a_y);
  const complexd hz(drive.a_z + drive.eta_z, 0.0);
  return {
      -i_unit * (hp + hz * state.alpha - hm * state.alpha * state.alpha),
      -i_unit * (hz - 2.0 * hm * state.alpha),
      -i_unit * (hm * std::exp(state.beta)),
  };
}

Unitary2 assemble_unitary(const DisentangleState& state) {
  if (!finite_c(state.alpha) || !finite_c(state.beta) ||
      !finite_c(state.gamma)) {
    fail(ErrorCode::NonFinite, "assemble: state must be finite");
  }
  if (std::abs(state.beta.real()) > kBetaGuard) {
    fail(ErrorCode::Overflow, "assemble: |Re beta| exceeds the overflow guard");
  }
  const complexd em = std::exp(-0.5 * state.beta);
  const complexd ep = std::exp(0.5 * state.beta);
  return {ep + state.alpha * state.gamma * em, state.alpha * em,
          state.gamma * em, em};
}

DisentangleState disentangle(const Unitary2& u) {
  const double r = std::abs(u.m22);
  if (r == 0.0 || -2.0 * std::log(r) > kBetaGuard) {
    fail(ErrorCode::Overflow,
         "disentangle: chart singular, |u22| too small (|Re beta| > guard)");
  }
  DisentangleState s;
  s.alpha = u.m12 / u.m22;
  s.gamma = u.m21 / u.m22;
  s.beta = -2.0 * std::log(u.m22);
  return s;
}

DisentangleState propagate_disentangled(const PiecewiseDrive& drive,
                                        double substep) {
  check_drive(drive);
  check_substep(substep);
  ChartState chart;
  walk(drive, {}, substep, &chart, nullptr, [](std::size_t) {});
  DisentangleState out;
  if (chart.restarted) {
    out = disentangle(chart.unitary());
  } else {
    out = {chart.alpha, chart.beta, chart.gamma, 0.0};
    if (std::abs(out.beta.real()) > kBetaGuard) {
      fail(ErrorCode::Overflow,
           "propagate: |Re beta| exceeds the overflow guard");
    }
  }
  out.t = drive.t_end();
  return out;
}

DisentangleState propagate_disentangled(std::span<const AxisPulse> pulses,
                                        const RtnTrajectory* noise,
                                        double t_end, double substep) {
  return propagate_disentangled(build_drive(pulses, noise, t_end), substep);
}

Unitary2 propagate_exact(const PiecewiseDrive& drive) {
  check_drive(drive);
  ExactState exact;
  walk(drive, {}, kDefaultSubstep, nullptr, &exact, [](std::size_t) {});
  return exact.u;
}

Unitary2 propagate_exact(std::span<const AxisPulse> pulses,
                         const RtnTrajectory* noise, double t_end) {
  return propagate_exact(build_drive(pulses, noise, t_end));
}

std::vector<Unitary2> propagate_samples(const PiecewiseDrive& drive,
                                        std::span<const double> times,
                                        PropagatorMethod method,
                                        double substep) {
  check_drive(drive);
  check_substep(substep);
  check_times(drive, times);

  std::vector<Unitary2> out(times.size());
  ChartState chart;
  ExactState exact;
  ChartState* chart_p =
      method != PropagatorMethod::Exact ? &chart : nullptr;
  ExactState* exact_p =
      method != PropagatorMethod::Disentangle ? &exact : nullptr;
  walk(drive, times, substep, chart_p, exact_p, [&](std::size_t si) {
    if (method == PropagatorMethod::Exact) {
      out[si] = exact.u;
      return;
    }
    out[si] = chart.unitary();
    if (method == PropagatorMethod::Both) {
      const double diff = max_abs_diff(out[si], exact.u);
      if (diff > kCrossCheckTolerance) {
        fail(ErrorCode::Diverged,
             "propagate: routes diverged by " + std::to_string(diff) +
                 " at t = " + std::to_string(times[si]));
      }
    }
  });
  return out;
}

}  // namespace rtnsim
