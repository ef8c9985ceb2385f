#pragma once

#include <string_view>
#include <vector>

namespace rtnsim {

enum class PulseFamily { Cosine, Sine };

enum class Axis { X = 0, Y = 1, Z = 2 };

// One square-wave drive channel: amplitude * sign(trig(t/t0 + r0)).
// Times are in ps with hbar = a_max = 1 (all quantities dimensionless).
struct PulseSpec {
  PulseFamily family = PulseFamily::Cosine;
  double t0 = 1.0;        // trig time scale, ps
  double r0 = 0.0;        // phase offset, rad (zero for the Cosine family)
  double amplitude = 1.0; // in units of a_max

  bool operator==(const PulseSpec&) const = default;
};

namespace presets {
inline constexpr PulseSpec C{PulseFamily::Cosine, 8.0, 0.0, 1.0};
inline constexpr PulseSpec QW{PulseFamily::Sine, 2.0, 2.56, 1.0};
inline constexpr PulseSpec BP{PulseFamily::Sine, 1.8, -0.6, 1.0};
}  // namespace presets

// nullptr when the name is not one of "C", "QW", "BP"
const PulseSpec* find_preset(std::string_view name);

// throws SimError(InvalidArgument) when t0 <= 0, amplitude < 0, r0 nonzero for
// the Cosine family, or any field is not finite
void validate_pulse(const PulseSpec& spec);

// amplitude * sign(trig(t/t0 + r0)); sign(0) is +1 (right-continuous waveform)
double eval_pulse(const PulseSpec& spec, double t);

// All zeros of the trig argument in the open interval (0, t_end), strictly
// increasing. Closed form (argument = k*pi grid), no root finding.
std::vector<double> jump_times(const PulseSpec& spec, double t_end);

}  // namespace rtnsim
