#pragma once

#include <numbers>

namespace tmo {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Angular frequency (rad/s) of a vacuum wavelength given in nanometres.
constexpr double omega_from_nm(double lambda_nm) {
  return kTwoPi * kSpeedOfLight / (lambda_nm * 1e-9);
}

constexpr double nm_from_omega(double omega) {
  return kTwoPi * kSpeedOfLight / omega * 1e9;
}

constexpr double um_from_omega(double omega) {
  return kTwoPi * kSpeedOfLight / omega * 1e6;
}

constexpr double omega_from_thz(double f_thz) { return kTwoPi * f_thz * 1e12; }

constexpr double thz_from_omega(double omega) { return omega / kTwoPi * 1e-12; }

}  // namespace tmo
