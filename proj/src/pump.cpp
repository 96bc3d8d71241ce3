#include "tmo/pump.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "tmo/constants.hpp"
#include "tmo/errors.hpp"

namespace tmo {

double hermite_function(int n, double x) {
  // Stable three-term recurrence on the normalised functions.
  double prev = 0.0;
  double cur = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  for (int k = 0; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

double gaussian_unit(double d, double sigma) {
  return std::pow(kPi * sigma * sigma, -0.25) * std::exp(-0.5 * d * d / (sigma * sigma));
}

// Norm^2 of sum_k c_k exp(i d tau_k) g(d) for the unit Gaussian g of width sigma.
double time_bin_norm2(const PumpSpec& p) {
  double acc = 0.0;
  for (std::size_t k = 0; k < p.delays.size(); ++k) {
    for (std::size_t l = 0; l < p.delays.size(); ++l) {
      const double dt = p.delays[k] - p.delays[l];
      const double overlap = std::exp(-0.25 * dt * dt * p.bandwidth * p.bandwidth);
      acc += std::real(p.amplitudes[k] * std::conj(p.amplitudes[l])) * overlap;
    }
  }
  return acc;
}

}  // namespace

PumpSpec PumpSpec::gaussian(double center, double sigma) {
  PumpSpec p;
  p.center = center;
  p.bandwidth = sigma;
  return p;
}

PumpSpec PumpSpec::hermite_gauss(double center, double sigma, int order) {
  PumpSpec p = gaussian(center, sigma);
  p.kind = Kind::kHermiteGauss;
  p.order = order;
  return p;
}

PumpSpec PumpSpec::time_bins(double center, double sigma, std::vector<double> delays,
                             std::vector<cdouble> amplitudes) {
  PumpSpec p = gaussian(center, sigma);
  p.kind = Kind::kTimeBins;
  p.delays = std::move(delays);
  p.amplitudes = std::move(amplitudes);
  return p;
}

void PumpSpec::validate() const {
  if (kind != Kind::kCustom && !(bandwidth > 0.0)) {
    throw PreconditionError(fmt::format("pump bandwidth must be positive, got {}", bandwidth));
  }
  if (kind == Kind::kHermiteGauss && order < 0) {
    throw PreconditionError(fmt::format("Hermite-Gauss order must be >= 0, got {}", order));
  }
  if (kind == Kind::kTimeBins) {
    if (delays.empty() || delays.size() != amplitudes.size()) {
      throw PreconditionError("time-bin pump needs one amplitude per delay");
    }
    double norm = 0.0;
    for (const auto& a : amplitudes) norm += std::norm(a);
    if (std::abs(norm - 1.0) > 1e-9) {
      throw PreconditionError(fmt::format("time-bin amplitudes must be normalised, sum |c|^2 = {}", norm));
    }
  }
  if (kind == Kind::kCustom) {
    if (custom_detuning.size() < 2 || custom_detuning.size() != custom_values.size()) {
      throw PreconditionError("custom pump needs at least two tabulated samples");
    }
    if (!std::is_sorted(custom_detuning.begin(), custom_detuning.end())) {
      throw PreconditionError("custom pump detunings must be ascending");
    }
  }
}

cdouble PumpSpec::envelope(double d) const {
  cdouble value;
  switch (kind) {
    case Kind::kGaussian:
      value = gaussian_unit(d, bandwidth);
      break;
    case Kind::kHermiteGauss:
      value = hermite_function(order, d / bandwidth) / std::sqrt(bandwidth);
      break;
    case Kind::kTimeBins: {
      cdouble acc = 0.0;
      for (std::size_t k = 0; k < delays.size(); ++k) acc += amplitudes[k] * std::polar(1.0, d * delays[k]);
      value = acc * gaussian_unit(d, bandwidth) / std::sqrt(time_bin_norm2(*this));
      break;
    }
    case Kind::kCustom: {
      // Normalisation of tabulated shapes is left to the joint-amplitude normalisation.
      if (d <= custom_detuning.front() || d >= custom_detuning.back()) return 0.0;
      const auto it = std::upper_bound(custom_detuning.begin(), custom_detuning.end(), d);
      const std::size_t j = static_cast<std::size_t>(it - custom_detuning.begin());
      const double t = (d - custom_detuning[j - 1]) / (custom_detuning[j] - custom_detuning[j - 1]);
      value = (1.0 - t) * custom_values[j - 1] + t * custom_values[j];
      break;
    }
  }
  if (!spectral_phase.empty()) {
    double phase = 0.0;
    for (std::size_t n = spectral_phase.size(); n-- > 0;) phase = phase * d + spectral_phase[n];
    value *= std::polar(1.0, phase);
  }
  return value;
}

double PumpSpec::feature_width() const {
  constexpr double kFwhm = 2.3548200450309493;  // 2 sqrt(2 ln 2)
  switch (kind) {
    case Kind::kGaussian:
      return kFwhm * bandwidth / std::sqrt(2.0);
    case Kind::kHermiteGauss:
      return kFwhm * bandwidth / std::sqrt(2.0 * (order + 1));
    case Kind::kTimeBins: {
      const auto [lo, hi] = std::minmax_element(delays.begin(), delays.end());
      const double spread = *hi - *lo;
      const double base = kFwhm * bandwidth / std::sqrt(2.0);
      return spread > 0.0 ? std::min(base, kPi / spread) : base;
    }
    case Kind::kCustom: {
      double step = custom_detuning.back() - custom_detuning.front();
      for (std::size_t j = 1; j < custom_detuning.size(); ++j) {
        step = std::min(step, custom_detuning[j] - custom_detuning[j - 1]);
      }
      return 4.0 * step;
    }
  }
  return bandwidth;
}

cdouble pump_envelope(const PumpSpec& spec, double omega_sum) { return spec.envelope(omega_sum - spec.center); }

}  // namespace tmo
