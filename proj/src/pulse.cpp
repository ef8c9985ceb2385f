#include "pulse.hpp"

#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace rtnsim {

namespace {
constexpr double kPi = std::numbers::pi;
}

const PulseSpec* find_preset(std::string_view name) {
  if (name == "C") return &presets::C;
  if (name == "QW") return &presets::QW;
  if (name == "BP") return &presets::BP;
  return nullptr;
}

void validate_pulse(const PulseSpec& spec) {
  if (!std::isfinite(spec.t0) || !std::isfinite(spec.r0) ||
      !std::isfinite(spec.amplitude)) {
    fail(ErrorCode::InvalidArgument, "pulse: fields must be finite");
  }
  if (spec.t0 <= 0.0) {
    fail(ErrorCode::InvalidArgument, "pulse: t0 must be > 0");
  }
  if (spec.amplitude < 0.0) {
    fail(ErrorCode::InvalidArgument, "pulse: amplitude must be >= 0");
  }
  if (spec.family == PulseFamily::Cosine && spec.r0 != 0.0) {
    fail(ErrorCode::InvalidArgument, "pulse: r0 must be 0 for the cosine family");
  }
}

double eval_pulse(const PulseSpec& spec, double t) {
  const double arg = t / spec.t0 + spec.r0;
  const double v =
      spec.family == PulseFamily::Cosine ? std::cos(arg) : std::sin(arg);
  return v < 0.0 ? -spec.amplitude : spec.amplitude;
}

std::vector<double> jump_times(const PulseSpec& spec, double t_end) {
  if (!(t_end > 0.0)) {
    fail(ErrorCode::InvalidArgument, "jump_times: t_end must be > 0");
  }
  // trig argument hits the zero grid z_k = k*pi (+ pi/2 for cosine) at
  // t = t0 * (z_k - r0)
  const double shift =
      spec.family == PulseFamily::Cosine ? 0.5 * kPi : 0.0;
  // smallest k with t0 * (k*pi + shift - r0) > 0
  long long k =
      static_cast<long long>(std::floor((spec.r0 - shift) / kPi)) + 1;
  std::vector<double> zeros;
  for (;; ++k) {
    const double t = spec.t0 * (static_cast<double>(k) * kPi + shift - spec.r0);
    if (t <= 0.0) continue;
    if (t >= t_end) break;
    zeros.push_back(t);
  }
  return zeros;
}

}  // namespace rtnsim
