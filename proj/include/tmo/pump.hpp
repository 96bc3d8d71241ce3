#pragma once

#include <vector>

#include "tmo/linalg.hpp"

namespace tmo {

/// Spectral envelope of the bright pump, in the detuning from its carrier.
///
/// Every shape is L2-normalised analytically: int |alpha(d)|^2 dd = 1.
struct PumpSpec {
  enum class Kind { kGaussian, kHermiteGauss, kTimeBins, kCustom };
  Kind kind = Kind::kGaussian;
  double center = 0.0;     // rad/s
  double bandwidth = 0.0;  // rad/s; alpha ~ exp(-d^2 / (2 sigma^2))
  int order = 0;           // Hermite-Gauss order
  std::vector<double> delays;         // s, time-bin centres
  std::vector<cdouble> amplitudes;    // time-bin weights
  std::vector<double> custom_detuning;  // rad/s, ascending; linear interpolation
  std::vector<cdouble> custom_values;
  std::vector<double> spectral_phase;  // phase(d) = sum_n c_n d^n

  /// Throws PreconditionError.
  void validate() const;
  cdouble envelope(double detuning) const;
  /// Narrowest spectral feature the grid has to resolve (rad/s, FWHM-like).
  double feature_width() const;

  static PumpSpec gaussian(double center, double sigma);
  static PumpSpec hermite_gauss(double center, double sigma, int order);
  static PumpSpec time_bins(double center, double sigma, std::vector<double> delays,
                            std::vector<cdouble> amplitudes);
};

cdouble pump_envelope(const PumpSpec& spec, double omega_sum);

/// Orthonormal Hermite-Gauss function psi_n(x) with unit width.
double hermite_function(int n, double x);

}  // namespace tmo
