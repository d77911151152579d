#pragma once

#include <numbers>

namespace dce {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kBohrRadius = 5.29e-11;       // m
inline constexpr double kPi = std::numbers::pi;

/// Wavenumber beyond which the dipole approximation no longer holds (2π/a₀).
inline constexpr double kDipoleLimitWavenumber = 2.0 * kPi / kBohrRadius;

}  // namespace dce
