#include "tmo/qpg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>
#include <fmt/format.h>

#include "tmo/constants.hpp"
#include "tmo/errors.hpp"

namespace tmo {

JointAmplitude build_transfer(const Process& process, const Phasematching& pm, const PumpSpec& pump,
                              const FrequencyGrid& grid) {
  if (process.kind() != ProcessKind::kSfg) {
    throw PreconditionError("transfer functions need a sum-frequency process");
  }
  return build_jsa(process, pm, pump, grid);
}

SchmidtData operation_schmidt(const JointAmplitude& transfer) { return schmidt(transfer); }

std::vector<double> low_gain_efficiencies(const std::vector<double>& weights, double theta) {
  if (theta < 0.0) throw PreconditionError(fmt::format("coupling theta must be >= 0, got {}", theta));
  std::vector<double> eta;
  eta.reserve(weights.size());
  for (double l : weights) {
    const double s = std::sin(std::sqrt(std::max(l, 0.0)) * theta);
    eta.push_back(s * s);
  }
  return eta;
}

std::vector<double> low_gain_efficiencies(const RVector& weights, double theta) {
  return low_gain_efficiencies(std::vector<double>(weights.data(), weights.data() + weights.size()), theta);
}

double selectivity(const std::vector<double>& eta) {
  if (eta.empty()) throw PreconditionError("selectivity of an empty efficiency list");
  const double total = std::accumulate(eta.begin(), eta.end(), 0.0);
  if (total == 0.0) return 0.0;
  return eta[0] * eta[0] / total;
}

double separability(const std::vector<double>& eta, std::size_t j, std::size_t d) {
  if (!(j <= d && d < eta.size())) {
    throw PreconditionError(fmt::format("separability needs j <= d < {}, got j = {}, d = {}", eta.size(), j, d));
  }
  const double total = std::accumulate(eta.begin(), eta.begin() + static_cast<std::ptrdiff_t>(d) + 1, 0.0);
  return total == 0.0 ? 0.0 : eta[j] / total;
}

ExtinctionRatio extinction_ratio(const std::vector<double>& eta, std::size_t j) {
  if (j >= eta.size()) throw PreconditionError(fmt::format("mode index {} out of range", j));
  double other = 0.0;
  for (std::size_t k = 0; k < eta.size(); ++k) {
    if (k != j) other = std::max(other, eta[k]);
  }
  if (other == 0.0) return {std::numeric_limits<double>::infinity(), true};
  return {10.0 * std::log10(eta[j] / other), false};
}

CMatrix GreensFunctions::block() const {
  const Eigen::Index n = aa.rows();
  const Eigen::Index cols = complete() ? 2 * n : n;
  CMatrix g(2 * n, cols);
  g.topLeftCorner(n, n) = aa;
  g.bottomLeftCorner(n, n) = ca;
  if (complete()) {
    g.topRightCorner(n, n) = ac;
    g.bottomRightCorner(n, n) = cc;
  }
  return g;
}

double GreensFunctions::unitarity_error() const {
  const CMatrix g = block();
  const CMatrix gram = g.adjoint() * g;
  return (gram - CMatrix::Identity(gram.rows(), gram.cols())).norm();
}

std::vector<double> GreensFunctions::efficiencies() const {
  Eigen::BDCSVD<CMatrix> svd(ca);
  const RVector s = svd.singularValues();
  std::vector<double> eta(static_cast<std::size_t>(s.size()));
  for (Eigen::Index k = 0; k < s.size(); ++k) eta[static_cast<std::size_t>(k)] = s(k) * s(k);
  return eta;
}

namespace {

CMatrix unitary_dft(Eigen::Index n) {
  CMatrix f(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index t = 0; t < n; ++t) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double x = static_cast<double>((t - n / 2) * (j - n / 2) % n) / static_cast<double>(n);
      f(t, j) = norm * std::polar(1.0, -kTwoPi * x);
    }
  }
  return f;
}

// Largest singular value squared by power iteration on M^dagger M; `v` is the start vector
// and returns the dominant right singular vector.
double top_efficiency(const CMatrix& m, CVector& v) {
  if (v.size() != m.cols()) v = CVector::Ones(m.cols()).normalized();
  double last = 0.0;
  for (int it = 0; it < 1000; ++it) {
    CVector w = m.adjoint() * (m * v);
    const double lambda = w.norm();
    if (lambda == 0.0) return 0.0;
    v = w / lambda;
    if (std::abs(lambda - last) <= 1e-13 * lambda) return lambda;
    last = lambda;
  }
  return last;
}

}  // namespace

GreensFunctions GreensFunctions::to_time_gauge() const {
  if (gauge == Gauge::kTime) return *this;
  const CMatrix f = unitary_dft(aa.rows());
  const CMatrix fi = f.adjoint();
  GreensFunctions out = *this;
  out.gauge = Gauge::kTime;
  out.aa = f * aa * fi;
  out.ca = f * ca * fi;
  if (complete()) {
    out.ac = f * ac * fi;
    out.cc = f * cc * fi;
  }
  return out;
}

GreensFunctions tmi_compose(const GreensFunctions& stage, double phase) {
  if (!stage.complete()) throw PreconditionError("interferometer stages need all four Green's functions");
  CVector v;
  const double eta0 = top_efficiency(stage.ca, v);
  if (eta0 < 0.45 || eta0 > 0.55) {
    throw PreconditionError(fmt::format("stage efficiency {:.4f} is outside [0.45, 0.55]", eta0));
  }
  const cdouble u = std::polar(1.0, phase);
  GreensFunctions out = stage;
  out.aa = stage.aa * stage.aa + u * (stage.ac * stage.ca);
  out.ac = stage.aa * stage.ac + u * (stage.ac * stage.cc);
  out.ca = stage.ca * stage.aa + u * (stage.cc * stage.ca);
  out.cc = stage.ca * stage.ac + u * (stage.cc * stage.cc);
  return out;
}

TmiScan optimize_tmi(const GreensFunctions& stage, std::size_t samples) {
  // Validates the stage window once; the scan itself only needs the converted block.
  (void)tmi_compose(stage, 0.0).ca;
  const CMatrix x = stage.ca * stage.aa;
  const CMatrix y = stage.cc * stage.ca;
  const double xx = x.squaredNorm();
  const double yy = y.squaredNorm();
  const cdouble xy = (x.adjoint() * y).trace();
  // Neighbouring phases share their dominant vector, so each solve starts from the last.
  CVector warm;
  auto eval = [&](double phase, double* eta0) {
    const cdouble u = std::polar(1.0, phase);
    const double total = xx + yy + 2.0 * std::real(u * xy);
    *eta0 = top_efficiency(x + u * y, warm);
    return total > 0.0 ? (*eta0) * (*eta0) / total : 0.0;
  };
  TmiScan scan;
  std::size_t best = 0;
  std::size_t worst = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double phase = kTwoPi * static_cast<double>(k) / static_cast<double>(samples);
    double e0 = 0.0;
    const double s = eval(phase, &e0);
    scan.phases.push_back(phase);
    scan.eta0.push_back(e0);
    scan.selectivity.push_back(s);
    if (s > scan.selectivity[best]) best = k;
    if (e0 < scan.eta0[worst]) worst = k;
  }
  // Golden-section refinement on the bracketing samples.
  auto refine = [&](std::size_t k, bool maximize_s) {
    const double h = kTwoPi / static_cast<double>(samples);
    double lo = scan.phases[k] - h;
    double hi = scan.phases[k] + h;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    auto score = [&](double p) {
      double e0 = 0.0;
      const double s = eval(p, &e0);
      return maximize_s ? s : -e0;
    };
    double c = hi - g * (hi - lo);
    double d = lo + g * (hi - lo);
    double fc = score(c);
    double fd = score(d);
    for (int it = 0; it < 40; ++it) {
      if (fc > fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - g * (hi - lo);
        fc = score(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + g * (hi - lo);
        fd = score(d);
      }
    }
    double p = 0.5 * (lo + hi);
    p = std::fmod(p + kTwoPi, kTwoPi);
    return p;
  };
  scan.best_phase = refine(best, true);
  scan.best_selectivity = eval(scan.best_phase, &scan.best_eta0);
  scan.destructive_phase = refine(worst, false);
  eval(scan.destructive_phase, &scan.destructive_eta0);
  return scan;
}

}  // namespace tmo
