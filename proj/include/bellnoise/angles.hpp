#pragma once

#include <cmath>
#include <numbers>

namespace bellnoise {

inline constexpr double pi = std::numbers::pi;

// Analyzer convention: spin-1/2 particles vs spin-1 photons. The photon
// form uses doubled angles everywhere.
enum class SpinConvention { half, photon };

inline int angle_factor(SpinConvention s) {
  return s == SpinConvention::half ? 1 : 2;
}

// Wrapped angle difference, always in [0, pi].
inline double wrap_delta(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 2.0 * pi);
  return pi - std::abs(d - pi);
}

inline double deg_to_rad(double deg) { return deg * pi / 180.0; }

}  // namespace bellnoise
