#pragma once

#include <array>
#include <span>
#include <vector>

#include "mat2.hpp"
#include "pulse.hpp"
#include "telegraph.hpp"

namespace rtnsim {

struct AxisPulse {
  PulseSpec pulse;
  Axis axis = Axis::X;
};

// Instantaneous drive: pulse channels summed per axis plus the z noise.
struct DriveSample {
  double a_x = 0.0;
  double a_y = 0.0;
  double a_z = 0.0;
  double eta_z = 0.0;
};

// Piecewise-constant drive on [0, t_end]: values[i] holds on
// [edges[i], edges[i+1]). Both propagation routes consume this form, so the
// discontinuous waveforms are never straddled by an integration step.
struct PiecewiseDrive {
  std::vector<double> edges;        // strictly increasing, edges.front() == 0
  std::vector<DriveSample> values;  // one per segment
  double t_end() const { return edges.back(); }
};

PiecewiseDrive build_drive(std::span<const AxisPulse> pulses,
                           const RtnTrajectory* noise, double t_end);

// Coordinates of the disentangled propagator
// U = exp(alpha s+) exp(beta sz) exp(gamma s-).
struct DisentangleState {
  complexd alpha{0.0};
  complexd beta{0.0};
  complexd gamma{0.0};
  double t = 0.0;
};

// d(alpha, beta, gamma)/dt under a frozen drive (hbar = 1):
//   d alpha = -i [ (a_x - i a_y)/2 + (a_z + eta_z) alpha - (a_x + i a_y)/2 alpha^2 ]
//   d beta  = -i [ (a_z + eta_z) - (a_x + i a_y) alpha ]
//   d gamma = -i (a_x + i a_y)/2 * exp(beta)
std::array<complexd, 3> riccati_rhs(const DisentangleState& state,
                                    const DriveSample& drive);

// U = [[e^{b/2} + a g e^{-b/2}, a e^{-b/2}], [g e^{-b/2}, e^{-b/2}]];
// det is exactly 1. Throws Overflow when |Re beta| > 200.
Unitary2 assemble_unitary(const DisentangleState& state);

// Inverse chart: alpha = u12/u22, gamma = u21/u22, beta = -2 Log u22.
// Throws Overflow when u22 is too small for the chart (|Re beta| would
// exceed 200); only meaningful for det U = 1.
DisentangleState disentangle(const Unitary2& u);

enum class PropagatorMethod { Disentangle, Exact, Both };

inline constexpr double kBetaGuard = 200.0;
inline constexpr double kDefaultSubstep = 1e-3;
// disentangled vs exact agreement required by method Both
inline constexpr double kCrossCheckTolerance = 1e-6;

// Feynman-disentangling route: RK4 on riccati_rhs with fixed substep between
// drive breakpoints. The chart is folded into an accumulated unitary and
// restarted whenever its coordinates grow, since alpha has a pole (and beta a
// log singularity) wherever the incremental u22 crosses zero.
DisentangleState propagate_disentangled(const PiecewiseDrive& drive,
                                        double substep);
DisentangleState propagate_disentangled(std::span<const AxisPulse> pulses,
                                        const RtnTrajectory* noise,
                                        double t_end, double substep);

// Exact oracle: closed-form exponential of -i (b . sigma / 2) dt per constant
// segment, multiplied in time order.
Unitary2 propagate_exact(const PiecewiseDrive& drive);
Unitary2 propagate_exact(std::span<const AxisPulse> pulses,
                         const RtnTrajectory* noise, double t_end);

// Unitaries at each sample time (strictly increasing, within [0, t_end]) along
// one drive realization. Method Both cross-checks the routes at every sample
// and throws Diverged beyond kCrossCheckTolerance.
std::vector<Unitary2> propagate_samples(const PiecewiseDrive& drive,
                                        std::span<const double> times,
                                        PropagatorMethod method,
                                        double substep);

}  // namespace rtnsim
