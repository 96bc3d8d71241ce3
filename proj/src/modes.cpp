#include "tmo/modes.hpp"

#include <cmath>

#include <fmt/format.h>

#include "tmo/constants.hpp"
#include "tmo/errors.hpp"
#include "tmo/pump.hpp"

namespace tmo {

CMatrix ModeBasis::gram() const { return vectors.adjoint() * vectors * axis.step(); }

ModeBasis hermite_gauss_basis(std::size_t d, double center, double sigma, const FrequencyAxis& axis) {
  axis.validate();
  if (d == 0) throw PreconditionError("basis dimension must be positive");
  if (!(sigma > 0.0)) throw PreconditionError(fmt::format("mode width must be positive, got {}", sigma));
  if (axis.span < 6.0 * sigma * std::sqrt(static_cast<double>(d))) {
    throw ResolutionError(fmt::format("axis span {:.4g} is below 6 sigma sqrt(d) = {:.4g}", axis.span,
                                      6.0 * sigma * std::sqrt(static_cast<double>(d))));
  }
  ModeBasis b;
  b.label = fmt::format("hermite_gauss_{}", d);
  b.axis = axis;
  b.vectors.resize(static_cast<Eigen::Index>(axis.points), static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < axis.points; ++j) {
    const double x = (axis.detuning(j) - center) / sigma;
    for (std::size_t n = 0; n < d; ++n) {
      b.vectors(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(n)) =
          hermite_function(static_cast<int>(n), x) / std::sqrt(sigma);
    }
  }
  return b;
}

std::vector<double> hermite_gauss_overlaps(const CMatrix& modes, const FrequencyAxis& axis, std::size_t count) {
  if (count > static_cast<std::size_t>(modes.cols())) {
    throw PreconditionError(fmt::format("asked for {} overlaps from {} modes", count, modes.cols()));
  }
  const double step = axis.step();
  double m0 = 0.0;
  double m1 = 0.0;
  for (std::size_t j = 0; j < axis.points; ++j) {
    const double w = std::norm(modes(static_cast<Eigen::Index>(j), 0));
    m0 += w;
    m1 += w * axis.detuning(j);
  }
  const double center = m1 / m0;
  double m2 = 0.0;
  for (std::size_t j = 0; j < axis.points; ++j) {
    const double x = axis.detuning(j) - center;
    m2 += std::norm(modes(static_cast<Eigen::Index>(j), 0)) * x * x;
  }
  // |psi_0(x / sigma)|^2 has variance sigma^2 / 2.
  const double sigma = std::sqrt(2.0 * m2 / m0);
  std::vector<double> out;
  for (std::size_t n = 0; n < count; ++n) {
    cdouble dot = 0.0;
    for (std::size_t j = 0; j < axis.points; ++j) {
      const double x = (axis.detuning(j) - center) / sigma;
      dot += hermite_function(static_cast<int>(n), x) / std::sqrt(sigma) *
             modes(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(n));
    }
    out.push_back(std::norm(dot * step));
  }
  return out;
}

ModeBasis bin_basis(BinKind kind, std::size_t d, double spacing, double width, const FrequencyAxis& axis) {
  axis.validate();
  if (d == 0) throw PreconditionError("basis dimension must be positive");
  if (!(width > 0.0) || !(spacing > width)) {
    throw PreconditionError(fmt::format("bins overlap: spacing {:.4g} must exceed width {:.4g}", spacing, width));
  }
  const std::size_t n = axis.points;
  const double sample = kind == BinKind::kFrequency ? axis.step() : kTwoPi / (static_cast<double>(n) * axis.step());
  ModeBasis b;
  b.label = kind == BinKind::kFrequency ? fmt::format("frequency_bins_{}", d) : fmt::format("time_bins_{}", d);
  b.axis = axis;
  b.vectors = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  const double half_extent = 0.5 * static_cast<double>(n) * sample;
  for (std::size_t k = 0; k < d; ++k) {
    const double c = (static_cast<double>(k) - 0.5 * static_cast<double>(d - 1)) * spacing;
    if (std::abs(c) + 0.5 * width > half_extent) {
      throw ResolutionError(fmt::format("bin {} at {:.4g} falls outside the sampled range", k, c));
    }
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < n; ++j) {
      const double x = (static_cast<double>(j) - static_cast<double>(n / 2)) * sample;
      if (std::abs(x - c) < 0.5 * width) members.push_back(j);
    }
    if (members.empty()) throw ResolutionError(fmt::format("bin {} contains no samples", k));
    const auto col = static_cast<Eigen::Index>(k);
    if (kind == BinKind::kFrequency) {
      for (std::size_t j : members) b.vectors(static_cast<Eigen::Index>(j), col) = 1.0;
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        const double w = axis.detuning(j);
        cdouble acc = 0.0;
        for (std::size_t t : members) {
          acc += std::polar(1.0, w * (static_cast<double>(t) - static_cast<double>(n / 2)) * sample);
        }
        b.vectors(static_cast<Eigen::Index>(j), col) = acc;
      }
    }
    b.vectors.col(col) /= std::sqrt(b.vectors.col(col).squaredNorm() * axis.step());
  }
  return b;
}

std::vector<CMatrix> mub_coefficients(std::size_t d) {
  if (d != 2 && d != 3 && d != 5 && d != 7) {
    throw PreconditionError(fmt::format("mutually unbiased bases are supported for d in {{2, 3, 5, 7}}, got {}", d));
  }
  const auto n = static_cast<Eigen::Index>(d);
  std::vector<CMatrix> out;
  out.push_back(CMatrix::Identity(n, n));
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t b = 0; b < d; ++b) {
    CMatrix m(n, n);
    for (std::size_t v = 0; v < d; ++v) {
      for (std::size_t k = 0; k < d; ++k) {
        // Exponents reduced modulo d (mod 4 for the qubit) before conversion to a phase.
        double turns = 0.0;
        if (d == 2) {
          turns = static_cast<double>((b * k * k + 2 * v * k) % 4) / 4.0;
        } else {
          turns = static_cast<double>((b * k * k + v * k) % d) / static_cast<double>(d);
        }
        m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(v)) = norm * std::polar(1.0, kTwoPi * turns);
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<ModeBasis> mub_set(std::size_t d, const ModeBasis& basis) {
  if (basis.dimension() != d) {
    throw PreconditionError(fmt::format("basis has dimension {}, expected {}", basis.dimension(), d));
  }
  std::vector<ModeBasis> out;
  const auto coeffs = mub_coefficients(d);
  for (std::size_t b = 0; b < coeffs.size(); ++b) {
    ModeBasis m;
    m.label = fmt::format("{}_mub{}", basis.label, b);
    m.axis = basis.axis;
    m.vectors = basis.vectors * coeffs[b];
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<CVector> mub_projectors(std::size_t d) {
  std::vector<CVector> out;
  for (const CMatrix& m : mub_coefficients(d)) {
    for (Eigen::Index v = 0; v < m.cols(); ++v) out.emplace_back(m.col(v));
  }
  return out;
}

}  // namespace tmo
