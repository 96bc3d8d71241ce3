#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "tmo/constants.hpp"
#include "tmo/errors.hpp"
#include "tmo/poling.hpp"

namespace tmo {

namespace {

struct Window {
  std::vector<double> dk;
  std::vector<double> target;
  std::vector<cdouble> carrier;  // unit phase the pattern should carry at each dk
};

Window target_window(const TargetEnvelope& t, double length, std::size_t points) {
  Window w;
  if (t.kind == TargetEnvelope::Kind::kCustom) {
    for (const auto& [dk, v] : t.samples) {
      w.dk.push_back(dk);
      w.target.push_back(v);
    }
    return w;
  }
  const double half = 6.0 * t.width;
  if (points == 0) {
    const double lobes = 2.0 * half * length / kTwoPi;
    points = std::max<std::size_t>(101, static_cast<std::size_t>(8.0 * lobes) | 1U);
  }
  const double peak = t.gaussian_peak(length);
  for (std::size_t m = 0; m < points; ++m) {
    const double off = -half + 2.0 * half * static_cast<double>(m) / static_cast<double>(points - 1);
    w.dk.push_back(t.center + off);
    w.target.push_back(peak * std::exp(-0.5 * off * off / (t.width * t.width)));
  }
  return w;
}

// Least-squares state over the window: phi_m = sum_j chi_j T(m, j). With a carrier the
// residual is complex (phi - target * carrier); without one only |phi| is matched.
class Objective {
 public:
  Objective(const Window& w, const std::vector<double>& edges, const std::vector<int>& signs)
      : rows_(w.dk.size()), cols_(signs.size()) {
    const double L = edges.back();
    terms_.resize(rows_ * cols_);
    phi_.assign(rows_, 0.0);
    for (std::size_t j = 0; j < cols_; ++j) {
      const double z0 = edges[j];
      const double width = edges[j + 1] - z0;
      for (std::size_t m = 0; m < rows_; ++m) {
        const double x = 0.5 * w.dk[m] * width;
        const double s = std::abs(x) < 1e-8 ? 1.0 : std::sin(x) / x;
        const cdouble t = width / L * std::polar(1.0, w.dk[m] * (z0 + 0.5 * width)) * s;
        terms_[j * rows_ + m] = t;
        phi_[m] += static_cast<double>(signs[j]) * t;
      }
    }
    complex_ = !w.carrier.empty();
    target_.resize(rows_);
    for (std::size_t m = 0; m < rows_; ++m) target_[m] = complex_ ? w.target[m] * w.carrier[m] : w.target[m];
    error_ = 0.0;
    for (std::size_t m = 0; m < rows_; ++m) error_ += residual2(phi_[m], m);
  }

  double error() const { return error_; }
  const std::vector<cdouble>& phi() const { return phi_; }

  // Error after flipping domain j currently carrying `sign`.
  double trial(std::size_t j, int sign) const {
    double e = 0.0;
    const cdouble* col = &terms_[j * rows_];
    for (std::size_t m = 0; m < rows_; ++m) e += residual2(phi_[m] - 2.0 * sign * col[m], m);
    return e;
  }

  void commit(std::size_t j, int sign, double new_error) {
    const cdouble* col = &terms_[j * rows_];
    for (std::size_t m = 0; m < rows_; ++m) phi_[m] -= 2.0 * sign * col[m];
    error_ = new_error;
  }

 private:
  double residual2(cdouble phi, std::size_t m) const {
    if (complex_) return std::norm(phi - target_[m]);
    const double r = std::abs(phi) - std::real(target_[m]);
    return r * r;
  }

  std::size_t rows_;
  std::size_t cols_;
  bool complex_ = false;
  std::vector<cdouble> target_;
  std::vector<cdouble> terms_;
  std::vector<cdouble> phi_;
  double error_ = 0.0;
};

// Domain-by-domain choice keeping the running amplitude at the grating peak on the
// cumulative Gaussian profile centred at L/2.
std::vector<int> track_gaussian(const TargetEnvelope& t, const PolingPattern& lattice) {
  const double L = lattice.length();
  const double s = 1.0 / t.width;
  const cdouble u0 = phasematching_amplitude(lattice, t.center);
  const cdouble unit = u0 / std::abs(u0);
  auto cumulative = [&](double z) {
    return 2.0 / kPi / L * s * std::sqrt(kPi / 2.0) *
           (std::erf((z - 0.5 * L) / (std::sqrt(2.0) * s)) + std::erf(0.5 * L / (std::sqrt(2.0) * s)));
  };
  std::vector<int> signs(lattice.signs.size());
  cdouble acc = 0.0;
  for (std::size_t j = 0; j < signs.size(); ++j) {
    const double z0 = lattice.boundaries[j];
    const double z1 = lattice.boundaries[j + 1];
    const double x = 0.5 * t.center * (z1 - z0);
    const cdouble term = (z1 - z0) / L * std::polar(1.0, 0.5 * t.center * (z0 + z1)) * (std::sin(x) / x);
    const cdouble goal = unit * cumulative(z1);
    signs[j] = std::norm(acc + term - goal) <= std::norm(acc - term - goal) ? 1 : -1;
    acc += static_cast<double>(signs[j]) * term;
  }
  return signs;
}

}  // namespace

ApodizeResult apodize(const TargetEnvelope& target, double length, double period,
                      std::uint64_t seed, const ApodizeOptions& options) {
  target.validate();
  const PolingPattern start = periodic_pattern(period, length, 0.5);
  if (target.kind == TargetEnvelope::Kind::kGaussian && target.width * length >= kTwoPi) {
    throw PreconditionError(fmt::format(
        "target width {} rad/m is not narrower than the uniform main lobe {} rad/m", target.width,
        kTwoPi / length));
  }
  Window window = target_window(target, length, options.window_points);
  if (target.kind == TargetEnvelope::Kind::kGaussian) {
    // Symmetric profile about L/2, sharing the uniform grating's phase at the centre.
    const cdouble u0 = phasematching_amplitude(start, target.center);
    const cdouble unit = u0 / std::abs(u0);
    for (double dk : window.dk) window.carrier.push_back(unit * std::polar(1.0, 0.5 * (dk - target.center) * length));
  }
  std::vector<int> signs = start.signs;
  if (target.kind == TargetEnvelope::Kind::kGaussian && options.track) {
    signs = track_gaussian(target, start);
  }
  Objective obj(window, start.boundaries, signs);

  ApodizeResult result;
  const std::size_t n = signs.size();
  double scale = 0.0;
  for (double v : window.target) scale += v * v;
  const double exact = 1e-20 * std::max(scale, 1e-300);
  result.residual = obj.error();
  if (obj.error() > exact) {
    for (std::size_t j = 0; j < n; ++j) {
      const double e = obj.trial(j, signs[j]);
      ++result.evaluations;
      if (e < obj.error()) {
        obj.commit(j, signs[j], e);
        signs[j] = -signs[j];
      }
    }
    const std::size_t budget = options.budget ? options.budget : 50 * n;
    double temperature = options.initial_temperature > 0.0 ? options.initial_temperature
                                                           : 1e-3 * obj.error();
    const double cooling =
        options.cooling > 0.0 ? options.cooling : std::pow(1e-4, 1.0 / static_cast<double>(budget));
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<int> best = signs;
    double best_error = obj.error();
    for (std::size_t it = 0; it < budget && obj.error() > exact; ++it) {
      const std::size_t j = pick(rng);
      const double e = obj.trial(j, signs[j]);
      ++result.evaluations;
      const double delta = e - obj.error();
      if (delta < 0.0 || unit(rng) < std::exp(-delta / temperature)) {
        obj.commit(j, signs[j], e);
        signs[j] = -signs[j];
        if (e < best_error) {
          best_error = e;
          best = signs;
        }
      }
      temperature *= cooling;
    }
    signs = best;
    result.residual = best_error;
  }

  PolingPattern lattice{start.boundaries, signs};
  result.pattern = enforce_min_domain(lattice, options.min_domain);
  if (target.kind == TargetEnvelope::Kind::kGaussian) {
    SidelobeWindow sw;
    sw.center = target.center;
    sw.inner = std::max(3.0 * target.width, kTwoPi / length);
    sw.outer = 6.0 * target.width;
    result.suppression_db = sidelobe_suppression(result.pattern, period, sw);
    result.converged = result.suppression_db >= options.required_suppression_db;
  } else {
    result.converged = result.residual <= exact;
  }
  return result;
}

}  // namespace tmo
