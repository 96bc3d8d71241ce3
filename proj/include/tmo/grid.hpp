#pragma once

#include <cstddef>
#include <vector>

namespace tmo {

/// Uniform sampling of one angular-frequency axis.
///
/// Sample j sits at center + (j - points/2) * step, with step = span / points,
/// so the center frequency is always sampled exactly and the axis is FFT-ready.
struct FrequencyAxis {
  double center = 0.0;  // rad/s
  double span = 0.0;    // rad/s
  std::size_t points = 0;

  double step() const { return span / static_cast<double>(points); }
  double detuning(std::size_t j) const {
    return (static_cast<double>(j) - static_cast<double>(points / 2)) * step();
  }
  double omega(std::size_t j) const { return center + detuning(j); }
  std::vector<double> detunings() const;

  void validate() const;
};

/// Two-axis grid for joint amplitudes (signal x idler, or input x output).
struct FrequencyGrid {
  FrequencyAxis a;
  FrequencyAxis b;

  double cell() const { return a.step() * b.step(); }
  void validate() const;
};

}  // namespace tmo
