#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "propagator.hpp"
#include "rng.hpp"

using namespace rtnsim;

namespace {

constexpr double kPi = std::numbers::pi;

bool close(complexd a, complexd b, double tol = 1e-14) {
  return std::abs(a - b) <= tol;
}

// random piecewise-constant drive, the spec's randomized property domain:
// up to 20 segments, amplitudes in [-1.2, 1.2], t_end <= 20
PiecewiseDrive random_drive(RngStream& rng, bool x_only = false) {
  PiecewiseDrive drive;
  const int segments = 1 + static_cast<int>(rng.next_u64() % 20u);
  const double t_end = 0.5 + 19.5 * rng.next_open01();
  std::vector<double> edges{0.0, t_end};
  for (int i = 1; i < segments; ++i) edges.push_back(t_end * rng.next_open01());
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  drive.edges = edges;
  drive.values.resize(drive.edges.size() - 1);
  for (DriveSample& v : drive.values) {
    v.a_x = 2.4 * (rng.next_open01() - 0.5);
    if (!x_only) {
      v.a_y = 2.4 * (rng.next_open01() - 0.5);
      v.a_z = 2.4 * (rng.next_open01() - 0.5);
    }
  }
  return drive;
}

std::vector<double> random_times(RngStream& rng, double t_end, int count) {
  std::vector<double> times;
  for (int i = 0; i < count; ++i) times.push_back(t_end * rng.next_open01());
  times.push_back(t_end);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

// independent quadrature of the x-channel rotation area
double area_at(const PiecewiseDrive& drive, double t) {
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < drive.edges.size(); ++i) {
    const double lo = drive.edges[i];
    const double hi = std::min(drive.edges[i + 1], t);
    if (hi <= lo) break;
    area += drive.values[i].a_x * (hi - lo);
  }
  return area;
}

PiecewiseDrive slice(const PiecewiseDrive& drive, double from, double to) {
  PiecewiseDrive out;
  out.edges.push_back(0.0);
  for (std::size_t i = 0; i + 1 < drive.edges.size(); ++i) {
    const double lo = std::max(drive.edges[i], from);
    const double hi = std::min(drive.edges[i + 1], to);
    if (hi <= lo) continue;
    out.values.push_back(drive.values[i]);
    out.edges.push_back(hi - from);
  }
  return out;
}

}  // namespace

TEST_CASE("riccati_rhs matches direct substitution") {
  const complexd mi(0.0, -1.0);

  DisentangleState s{};
  const auto d1 = riccati_rhs(s, {1.0, 0.0, 0.0, 0.0});
  CHECK(close(d1[0], 0.5 * mi));
  CHECK(close(d1[1], 0.0));
  CHECK(close(d1[2], 0.5 * mi));

  const auto d2 = riccati_rhs(s, {0.0, 0.0, 0.0, 0.0});
  CHECK(close(d2[0], 0.0));
  CHECK(close(d2[1], 0.0));
  CHECK(close(d2[2], 0.0));

  s.alpha = 1.0;
  const auto d3 = riccati_rhs(s, {0.0, 0.0, 1.0, 0.0});
  CHECK(close(d3[0], mi));
  CHECK(close(d3[1], mi));
  CHECK(close(d3[2], 0.0));

  // noise enters only through a_z + eta_z
  const auto d4 = riccati_rhs(s, {0.0, 0.0, 0.4, 0.6});
  CHECK(close(d4[0], d3[0]));
  CHECK(close(d4[1], d3[1]));
}

TEST_CASE("assemble_unitary on reference states") {
  const Unitary2 id = assemble_unitary({0.0, 0.0, 0.0, 0.0});
  CHECK(max_abs_diff(id, Mat2::identity()) == 0.0);

  const Unitary2 diag = assemble_unitary({0.0, complexd(0.0, kPi), 0.0, 0.0});
  CHECK(close(diag.m11, complexd(0.0, 1.0)));
  CHECK(close(diag.m22, complexd(0.0, -1.0)));
  CHECK(close(diag.m12, 0.0));
  CHECK(close(diag.m21, 0.0));
}

TEST_CASE("assembled determinant is 1 for any finite state") {
  RngStream rng(7, 0);
  for (int i = 0; i < 200; ++i) {
    DisentangleState s;
    s.alpha = complexd(4.0 * (rng.next_open01() - 0.5), 4.0 * (rng.next_open01() - 0.5));
    s.gamma = complexd(4.0 * (rng.next_open01() - 0.5), 4.0 * (rng.next_open01() - 0.5));
    s.beta = complexd(6.0 * (rng.next_open01() - 0.5), 6.0 * (rng.next_open01() - 0.5));
    CHECK(det_defect(assemble_unitary(s)) <= 1e-12);
  }
}

TEST_CASE("disentangle inverts assemble while the chart is regular") {
  RngStream rng(8, 1);
  for (int i = 0; i < 100; ++i) {
    DisentangleState s;
    s.alpha = complexd(2.0 * (rng.next_open01() - 0.5), 2.0 * (rng.next_open01() - 0.5));
    s.gamma = complexd(2.0 * (rng.next_open01() - 0.5), 2.0 * (rng.next_open01() - 0.5));
    s.beta = complexd(3.0 * (rng.next_open01() - 0.5), 3.0 * (rng.next_open01() - 0.5));
    const DisentangleState r = disentangle(assemble_unitary(s));
    CHECK(close(r.alpha, s.alpha, 1e-12));
    CHECK(close(r.beta, s.beta, 1e-12));
    CHECK(close(r.gamma, s.gamma, 1e-12));
  }
}

TEST_CASE("overflow guard") {
  CHECK_THROWS_AS((void)assemble_unitary({0.0, complexd(201.0, 0.0), 0.0, 0.0}),
                  SimError);
  // u22 = 0: the chart is singular at a perfect flip
  CHECK_THROWS_AS((void)disentangle(Mat2::pauli_x()), SimError);
  try {
    (void)disentangle(Mat2::pauli_x());
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::Overflow);
  }
}

TEST_CASE("free evolution stays at the origin of the chart") {
  const DisentangleState s = propagate_disentangled({}, nullptr, 7.0, 1e-3);
  CHECK(s.alpha == complexd(0.0));
  CHECK(s.beta == complexd(0.0));
  CHECK(s.gamma == complexd(0.0));
  CHECK(s.t == 7.0);
  const Unitary2 u = propagate_exact({}, nullptr, 7.0);
  CHECK(max_abs_diff(u, Mat2::identity()) == 0.0);
}

TEST_CASE("constant x drive rotates by the accumulated area") {
  const AxisPulse on_x[] = {{presets::C, Axis::X}};  // constant +1 below 4*pi

  const Unitary2 half = propagate_exact(on_x, nullptr, kPi / 2.0);
  CHECK(std::norm(half.m21) == doctest::Approx(0.5).epsilon(1e-12));

  const Unitary2 full = propagate_exact(on_x, nullptr, kPi);
  CHECK(std::norm(full.m21) == doctest::Approx(1.0).epsilon(1e-12));

  // the disentangled route lands on the same flip despite the chart pole
  const DisentangleState s = propagate_disentangled(on_x, nullptr, kPi, 1e-3);
  const Unitary2 u = assemble_unitary(s);
  CHECK(std::abs(u.m21) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("BP pulse flips the spin at its reference gate time") {
  const AxisPulse on_x[] = {{presets::BP, Axis::X}};
  const Unitary2 u = propagate_exact(on_x, nullptr, 8.20);
  CHECK(std::norm(u.m21) >= 0.999);
}

TEST_CASE("QW pulse with a fixed RTN trajectory: routes agree entrywise") {
  const AxisPulse on_x[] = {{presets::QW, Axis::X}};
  const RtnParams params{0.125, 0.3, RtnMode::FormulaResampled, 77};
  const RtnTrajectory traj = sample_trajectory(params, 5.0, 2);
  const PiecewiseDrive drive = build_drive(on_x, &traj, 5.0);
  const double times[] = {1.0, 2.5, 4.0, 5.0};
  const auto dis =
      propagate_samples(drive, times, PropagatorMethod::Disentangle, 1e-3);
  const auto exact =
      propagate_samples(drive, times, PropagatorMethod::Exact, 1e-3);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(max_abs_diff(dis[i], exact[i]) <= 1e-6);
  }
}

TEST_CASE("oracle equivalence on randomized piecewise drives") {
  RngStream rng(314159, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 60; ++trial) {
    const PiecewiseDrive drive = random_drive(rng);
    const auto times = random_times(rng, drive.t_end(), 8);
    const auto dis =
        propagate_samples(drive, times, PropagatorMethod::Disentangle, 1e-3);
    const auto exact =
        propagate_samples(drive, times, PropagatorMethod::Exact, 1e-3);
    for (std::size_t i = 0; i < times.size(); ++i) {
      worst = std::max(worst, max_abs_diff(dis[i], exact[i]));
      // unitarity and unit determinant for both routes
      CHECK(unitarity_defect(dis[i]) <= 1e-9);
      CHECK(unitarity_defect(exact[i]) <= 1e-9);
      CHECK(det_defect(dis[i]) <= 1e-9);
      CHECK(det_defect(exact[i]) <= 1e-9);
    }
  }
  CHECK(worst <= 1e-6);
  MESSAGE("worst route divergence: ", worst);
}

TEST_CASE("method Both cross-checks and returns the disentangled route") {
  RngStream rng(5150, 0);
  const PiecewiseDrive drive = random_drive(rng);
  const double times[] = {drive.t_end()};
  const auto both = propagate_samples(drive, times, PropagatorMethod::Both, 1e-3);
  const auto dis =
      propagate_samples(drive, times, PropagatorMethod::Disentangle, 1e-3);
  CHECK(max_abs_diff(both[0], dis[0]) == 0.0);
}

TEST_CASE("method Both flags divergence when the substep is too coarse") {
  PiecewiseDrive drive;
  drive.edges = {0.0, 10.0};
  drive.values = {{1.1, -0.7, 0.9, 0.0}};
  const double times[] = {10.0};
  CHECK_THROWS_AS(
      (void)propagate_samples(drive, times, PropagatorMethod::Both, 2.5),
      SimError);
}

TEST_CASE("single-axis law: flip probability is sin^2(area/2)") {
  RngStream rng(2718, 0);
  for (int trial = 0; trial < 25; ++trial) {
    const PiecewiseDrive drive = random_drive(rng, /*x_only=*/true);
    const auto times = random_times(rng, drive.t_end(), 6);
    const auto exact =
        propagate_samples(drive, times, PropagatorMethod::Exact, 1e-3);
    const auto dis =
        propagate_samples(drive, times, PropagatorMethod::Disentangle, 1e-3);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double expected = std::pow(std::sin(0.5 * area_at(drive, times[i])), 2);
      CHECK(std::abs(std::norm(exact[i].m21) - expected) <= 1e-9);
      CHECK(std::abs(std::norm(dis[i].m21) - expected) <= 1e-6);
    }
  }
}

TEST_CASE("exact propagation composes across a split") {
  RngStream rng(1618, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const PiecewiseDrive drive = random_drive(rng);
    const double t_mid = drive.t_end() * rng.next_open01();
    if (t_mid <= 0.0) continue;
    const Unitary2 whole = propagate_exact(drive);
    const Unitary2 front = propagate_exact(slice(drive, 0.0, t_mid));
    const Unitary2 back = propagate_exact(slice(drive, t_mid, drive.t_end()));
    CHECK(max_abs_diff(back * front, whole) <= 1e-12);
  }
}

TEST_CASE("drive construction aligns breakpoints with every jump") {
  const AxisPulse on_x[] = {{presets::BP, Axis::X}};
  const RtnParams params{0.125, 0.5, RtnMode::FormulaResampled, 4};
  const RtnTrajectory traj = sample_trajectory(params, 13.0, 0);
  const PiecewiseDrive drive = build_drive(on_x, &traj, 13.0);

  for (double z : jump_times(presets::BP, 13.0)) {
    CHECK(std::count(drive.edges.begin(), drive.edges.end(), z) == 1);
  }
  for (double z : traj.jumps) {
    CHECK(std::count(drive.edges.begin(), drive.edges.end(), z) == 1);
  }
  CHECK(drive.edges.front() == 0.0);
  CHECK(drive.edges.back() == 13.0);
  // noise horizon shorter than t_end is rejected
  CHECK_THROWS_AS((void)build_drive(on_x, &traj, 14.0), SimError);
}

TEST_CASE("non-finite integration is reported, not propagated") {
  const PulseSpec violent{PulseFamily::Sine, 1.0, 0.3, 1e200};
  const AxisPulse on_x[] = {{violent, Axis::X}};
  try {
    (void)propagate_disentangled(on_x, nullptr, 1.0, 1e-3);
    FAIL("expected NonFinite");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::NonFinite);
  }
}

TEST_CASE("sample time validation") {
  RngStream rng(99, 0);
  const PiecewiseDrive drive = random_drive(rng);
  const double bad_order[] = {1.0, 0.5};
  CHECK_THROWS_AS((void)propagate_samples(drive, bad_order,
                                          PropagatorMethod::Exact, 1e-3),
                  SimError);
  const double beyond[] = {drive.t_end() + 1.0};
  CHECK_THROWS_AS(
      (void)propagate_samples(drive, beyond, PropagatorMethod::Exact, 1e-3),
      SimError);
  const double fine[] = {0.0, drive.t_end()};
  CHECK_THROWS_AS(
      (void)propagate_samples(drive, fine, PropagatorMethod::Disentangle, 0.0),
      SimError);
}
