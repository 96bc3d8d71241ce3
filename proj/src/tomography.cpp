#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <fmt/format.h>

#include "tmo/errors.hpp"
#include "tmo/modes.hpp"

namespace tmo {

namespace {

// Euclidean projection of v onto {x >= 0, sum x = 1}.
RVector project_simplex(const RVector& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double shift = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cumulative += u[k];
    const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) shift = t;
  }
  return (v.array() - shift).cwiseMax(0.0);
}

CMatrix psd_sqrt(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()));
  const RVector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

void validate_density(const CMatrix& rho, double tol) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw PreconditionError("density matrix must be square");
  if (!rho.allFinite()) throw PreconditionError("density matrix has non-finite entries");
  if ((rho - rho.adjoint()).norm() > tol) throw PreconditionError("density matrix is not Hermitian");
  if (std::abs(rho.trace() - cdouble(1.0)) > tol) {
    throw PreconditionError(fmt::format("density matrix trace is {}, not 1", std::real(rho.trace())));
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) {
    throw PreconditionError(fmt::format("density matrix has eigenvalue {}", es.eigenvalues().minCoeff()));
  }
}

std::vector<MeasurementRecord> simulate_projections(const CMatrix& rho, const std::vector<CVector>& projectors,
                                                    const std::optional<SamplingSpec>& sampling) {
  validate_density(rho);
  std::vector<MeasurementRecord> out;
  std::vector<double> prob;
  for (const CVector& v : projectors) {
    if (v.size() != rho.rows()) throw PreconditionError("projector dimension does not match the state");
    if (std::abs(v.norm() - 1.0) > 1e-9) throw PreconditionError("projectors must be unit vectors");
    const double p = std::clamp(std::real(v.dot(rho * v)), 0.0, 1.0);
    prob.push_back(p);
    out.push_back({v, p, std::nullopt});
  }
  if (!sampling) return out;
  const std::size_t group = sampling->group;
  if (group == 0 || projectors.size() % group != 0) {
    throw PreconditionError("projector count must be a multiple of the setting size");
  }
  const std::size_t settings = projectors.size() / group;
  std::mt19937_64 rng(sampling->seed);
  for (std::size_t s = 0; s < settings; ++s) {
    std::uint64_t shots = sampling->total_shots / settings + (s < sampling->total_shots % settings ? 1 : 0);
    const std::uint64_t setting_shots = shots;
    double remaining = 0.0;
    for (std::size_t k = 0; k < group; ++k) remaining += prob[s * group + k];
    // Multinomial draw as a chain of conditional binomials.
    for (std::size_t k = 0; k < group; ++k) {
      const std::size_t idx = s * group + k;
      std::uint64_t count = shots;
      if (k + 1 < group && remaining > 0.0) {
        const double q = std::clamp(prob[idx] / remaining, 0.0, 1.0);
        std::binomial_distribution<std::uint64_t> draw(shots, q);
        count = draw(rng);
      } else if (remaining <= 0.0) {
        count = 0;
      }
      remaining -= prob[idx];
      shots -= count;
      out[idx].value = static_cast<double>(count);
      out[idx].shots = setting_shots;
    }
  }
  return out;
}

CMatrix reconstruct(const std::vector<MeasurementRecord>& records, std::size_t d,
                    const std::optional<RMatrix>& response) {
  const auto n = static_cast<Eigen::Index>(d);
  const auto m = static_cast<Eigen::Index>(records.size());
  const Eigen::Index params = n * n;
  // Hermitian basis: E_kk, (E_kl + E_lk), i(E_kl - E_lk).
  RMatrix a(m, params);
  RVector f(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const CVector& v = records[static_cast<std::size_t>(r)].projector;
    if (v.size() != n) throw PreconditionError("record projector dimension does not match d");
    Eigen::Index col = 0;
    for (Eigen::Index k = 0; k < n; ++k) a(r, col++) = std::norm(v(k));
    for (Eigen::Index k = 0; k < n; ++k) {
      for (Eigen::Index l = k + 1; l < n; ++l) {
        const cdouble x = std::conj(v(k)) * v(l);
        a(r, col++) = 2.0 * std::real(x);
        a(r, col++) = -2.0 * std::imag(x);
      }
    }
    f(r) = records[static_cast<std::size_t>(r)].frequency();
  }
  if (response) {
    if (response->rows() != m || response->cols() != m) {
      throw PreconditionError("response matrix must be square in the record count");
    }
    f = response->colPivHouseholderQr().solve(f);
  }
  Eigen::ColPivHouseholderQR<RMatrix> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < params) {
    throw PreconditionError(fmt::format(
        "measurement set is informationally incomplete: rank {} of {} (deficiency {})", qr.rank(), params,
        params - qr.rank()));
  }
  const RVector x = qr.solve(f);
  CMatrix rho = CMatrix::Zero(n, n);
  Eigen::Index col = 0;
  for (Eigen::Index k = 0; k < n; ++k) rho(k, k) = x(col++);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = k + 1; l < n; ++l) {
      const double re = x(col++);
      const double im = x(col++);
      rho(k, l) = cdouble(re, im);
      rho(l, k) = cdouble(re, -im);
    }
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho + rho.adjoint()));
  const RVector mu = project_simplex(es.eigenvalues());
  CMatrix out = es.eigenvectors() * mu.asDiagonal() * es.eigenvectors().adjoint();
  return 0.5 * (out + out.adjoint());
}

double fidelity(const CMatrix& rho, const CMatrix& sigma) {
  validate_density(rho, 1e-8);
  validate_density(sigma, 1e-8);
  const CMatrix r = psd_sqrt(rho);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(r * sigma * r, Eigen::EigenvaluesOnly);
  const double t = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::min(t * t, 1.0);
}

CMatrix random_pure_state(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CVector v(static_cast<Eigen::Index>(d));
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = cdouble(g(rng), g(rng));
  v.normalize();
  return v * v.adjoint();
}

CMatrix random_mixed_state(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  const auto n = static_cast<Eigen::Index>(d);
  CMatrix a(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) a(k, l) = cdouble(g(rng), g(rng));
  }
  CMatrix rho = a * a.adjoint();
  return rho / std::real(rho.trace());
}

}  // namespace tmo
