#include "tmo/pdc.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "tmo/errors.hpp"

namespace tmo {

namespace {

// |sinc(x)|^2 half maximum sits at x = 1.3916; the Gaussian model matches it.
constexpr double kPmHalfWidth = 1.3916;

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

}  // namespace

double pump_detuning(const Process& process, double da, double db) {
  return process.kind() == ProcessKind::kPdc ? da + db : db - da;
}

cdouble phasematching_value(const Process& process, const Phasematching& pm, double da, double db) {
  const double L = process.length();
  switch (pm.model) {
    case Phasematching::Model::kSinc: {
      const double x = 0.5 * process.mismatch(da, db) * L;
      return sinc(x) * std::polar(1.0, x);
    }
    case Phasematching::Model::kGaussian: {
      const double x = 0.5 * process.mismatch(da, db) * L;
      return std::exp(-kGaussianPmGamma * x * x);
    }
    case Phasematching::Model::kPattern:
      if (!pm.pattern) throw PreconditionError("pattern phasematching selected without a pattern");
      return phasematching_amplitude(*pm.pattern, process.material_mismatch(da, db));
  }
  return 0.0;
}

void check_resolution(const Process& process, const Phasematching& pm, const PumpSpec& pump,
                      const FrequencyGrid& grid) {
  grid.validate();
  const double step = std::max(grid.a.step(), grid.b.step());
  const double pump_width = pump.feature_width();
  if (pump_width < 4.0 * step) {
    throw ResolutionError(fmt::format(
        "pump feature width {:.4g} rad/s spans fewer than 4 grid steps of {:.4g} rad/s", pump_width, step));
  }
  const double L = pm.model == Phasematching::Model::kPattern && pm.pattern ? pm.pattern->length()
                                                                             : process.length();
  const FrequencyAxis* axes[2] = {&grid.a, &grid.b};
  for (int k = 0; k < 2; ++k) {
    const double h = axes[k]->step();
    const double slope = k == 0 ? (process.mismatch(h, 0.0) - process.mismatch(-h, 0.0)) / (2 * h)
                                : (process.mismatch(0.0, h) - process.mismatch(0.0, -h)) / (2 * h);
    if (slope == 0.0) continue;
    const double width = 4.0 * kPmHalfWidth / (L * std::abs(slope));
    if (width < 4.0 * h) {
      throw ResolutionError(fmt::format(
          "phasematching width {:.4g} rad/s along axis {} spans fewer than 4 grid steps of {:.4g} rad/s",
          width, k == 0 ? 'a' : 'b', h));
    }
  }
}

JointAmplitude build_jsa(const Process& process, const Phasematching& pm, const PumpSpec& pump,
                         const FrequencyGrid& grid) {
  pump.validate();
  check_resolution(process, pm, pump, grid);
  const auto na = static_cast<Eigen::Index>(grid.a.points);
  const auto nb = static_cast<Eigen::Index>(grid.b.points);
  JointAmplitude out{grid, CMatrix(na, nb)};
  std::optional<PatternEvaluator> eval;
  if (pm.model == Phasematching::Model::kPattern) {
    if (!pm.pattern) throw PreconditionError("pattern phasematching selected without a pattern");
    eval.emplace(*pm.pattern);
  }
  for (Eigen::Index l = 0; l < nb; ++l) {
    const double db = grid.b.detuning(static_cast<std::size_t>(l));
    for (Eigen::Index j = 0; j < na; ++j) {
      const double da = grid.a.detuning(static_cast<std::size_t>(j));
      const cdouble alpha = pump.envelope(pump_detuning(process, da, db));
      if (alpha == 0.0) {
        out.values(j, l) = 0.0;
        continue;
      }
      const cdouble phi = eval ? (*eval)(process.material_mismatch(da, db))
                               : phasematching_value(process, pm, da, db);
      out.values(j, l) = alpha * phi;
    }
  }
  out.normalize();
  return out;
}

Passband Passband::rectangular(double lo, double hi) {
  Passband p;
  p.kind = Kind::kRectangular;
  p.lo = lo;
  p.hi = hi;
  return p;
}

Passband Passband::gaussian(double center, double sigma) {
  Passband p;
  p.kind = Kind::kGaussian;
  p.center = center;
  p.sigma = sigma;
  return p;
}

double Passband::amplitude(double d) const {
  switch (kind) {
    case Kind::kNone: return 1.0;
    case Kind::kRectangular: return d >= lo && d <= hi ? 1.0 : 0.0;
    case Kind::kGaussian: return std::exp(-0.25 * (d - center) * (d - center) / (sigma * sigma));
  }
  return 1.0;
}

void Passband::validate() const {
  if (kind == Kind::kRectangular && !(hi > lo)) {
    throw PreconditionError(fmt::format("rectangular passband [{}, {}] is empty", lo, hi));
  }
  if (kind == Kind::kGaussian && !(sigma > 0.0)) {
    throw PreconditionError(fmt::format("Gaussian passband width must be positive, got {}", sigma));
  }
}

FilteredAmplitude apply_filter(const JointAmplitude& jsa, const FilterSpec& filters) {
  filters.a.validate();
  filters.b.validate();
  FilteredAmplitude out{jsa, 1.0};
  const double before = jsa.norm2();
  for (Eigen::Index j = 0; j < out.jsa.values.rows(); ++j) {
    out.jsa.values.row(j) *= filters.a.amplitude(jsa.grid.a.detuning(static_cast<std::size_t>(j)));
  }
  for (Eigen::Index l = 0; l < out.jsa.values.cols(); ++l) {
    out.jsa.values.col(l) *= filters.b.amplitude(jsa.grid.b.detuning(static_cast<std::size_t>(l)));
  }
  const double after = out.jsa.norm2();
  if (!(after > 0.0)) throw PreconditionError("filters block the entire joint spectrum");
  out.transmission = after / before;
  out.jsa.normalize();
  return out;
}

PurityReport purity_report(const JointAmplitude& jsa, const FilterSpec& filters, std::size_t keep) {
  PurityReport r;
  const SchmidtData s = schmidt(jsa);
  r.schmidt_number = schmidt_number(s);
  r.purity = purity(s);
  r.g2 = marginal_g2(s);
  for (std::size_t k = 0; k < std::min(keep, s.size()); ++k) r.weights.push_back(s.weights(static_cast<Eigen::Index>(k)));
  if (filters.b.kind != Passband::Kind::kNone) {
    const FilteredAmplitude f = apply_filter(jsa, FilterSpec{Passband{}, filters.b});
    r.heralded_purity_a = purity(schmidt(f.jsa));
    r.transmission_b = f.transmission;
  }
  if (filters.a.kind != Passband::Kind::kNone) {
    const FilteredAmplitude f = apply_filter(jsa, FilterSpec{filters.a, Passband{}});
    r.heralded_purity_b = purity(schmidt(f.jsa));
    r.transmission_a = f.transmission;
  }
  return r;
}

PurityReport purity_report(const Process& process, const Phasematching& pm, const PumpSpec& pump,
                           const FrequencyGrid& grid, const FilterSpec& filters) {
  return purity_report(build_jsa(process, pm, pump, grid), filters);
}

std::vector<BandwidthSample> purity_vs_bandwidth(const Process& process, const Phasematching& pm,
                                                 const PumpSpec& pump, const FrequencyGrid& grid,
                                                 const std::vector<double>& bandwidths) {
  std::vector<BandwidthSample> out;
  for (double sigma : bandwidths) {
    PumpSpec p = pump;
    p.bandwidth = sigma;
    out.push_back({sigma, purity(schmidt(build_jsa(process, pm, p, grid)))});
  }
  return out;
}

SchmidtData engineer_state(const PumpSpec& pump, const Process& process, const Phasematching& pm,
                           const FrequencyGrid& grid) {
  const GvmContrast g = process.gvm();
  if (g.degenerate || std::abs(g.xi + 1.0) > 0.05) {
    throw PreconditionError(fmt::format(
        "state engineering needs symmetric group-velocity matching (xi within 0.05 of -1), got xi = {}", g.xi));
  }
  if (pm.model != Phasematching::Model::kGaussian) {
    throw PreconditionError("state engineering needs the Gaussian phasematching approximation");
  }
  return schmidt(build_jsa(process, pm, pump, grid));
}

}  // namespace tmo
