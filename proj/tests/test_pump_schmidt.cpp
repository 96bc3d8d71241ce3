#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tmo/constants.hpp"
#include "tmo/errors.hpp"
#include "tmo/pump.hpp"
#include "tmo/schmidt.hpp"

using namespace tmo;

namespace {

double pump_norm(const PumpSpec& p, double half_span, int points) {
  const double step = 2.0 * half_span / points;
  double s = 0.0;
  for (int j = 0; j < points; ++j) s += std::norm(p.envelope(-half_span + j * step)) * step;
  return s;
}

// Mehler kernel sum_n t^n psi_n(x) psi_n(y) on a square grid in units of the mode width.
JointAmplitude mehler(double t, std::size_t n, double span) {
  FrequencyGrid g{{0.0, span, n}, {0.0, span, n}};
  JointAmplitude f{g, CMatrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double x = g.a.detuning(i);
      const double y = g.b.detuning(j);
      f.values(i, j) = std::exp(-((1.0 + t * t) * (x * x + y * y) - 4.0 * t * x * y) / (2.0 * (1.0 - t * t)));
    }
  }
  f.normalize();
  return f;
}

}  // namespace

TEST_SUITE("pump_schmidt") {
  TEST_CASE("pump shapes are unit-normalised") {
    const double s = 1e12;
    CHECK(pump_norm(PumpSpec::gaussian(0.0, s), 12 * s, 4000) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(pump_norm(PumpSpec::hermite_gauss(0.0, s, 3), 14 * s, 4000) == doctest::Approx(1.0).epsilon(1e-9));
    const double r = 1.0 / std::sqrt(2.0);
    // Overlapping bins: the analytic norm carries the cross terms.
    const PumpSpec bins = PumpSpec::time_bins(0.0, s, {0.0, 0.8 / s}, {r, cdouble(0.0, r)});
    CHECK(pump_norm(bins, 12 * s, 8000) == doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("spectral phase leaves the magnitude unchanged") {
    PumpSpec p = PumpSpec::gaussian(0.0, 1e12);
    PumpSpec q = p;
    q.spectral_phase = {0.3, 1e-12, 4e-25};
    for (double d : {-2e12, 0.0, 7e11}) CHECK(std::abs(q.envelope(d)) == doctest::Approx(std::abs(p.envelope(d))));
  }

  TEST_CASE("time-bin amplitudes must be normalised") {
    CHECK_THROWS_AS(PumpSpec::time_bins(0.0, 1e12, {0.0, 1e-11}, {1.0, 1.0}).validate(), PreconditionError);
    PumpSpec bad = PumpSpec::gaussian(0.0, -1.0);
    CHECK_THROWS_AS(bad.validate(), PreconditionError);
  }

  TEST_CASE("Hermite functions: parity and orthonormality") {
    for (int n = 0; n < 8; ++n) {
      for (double x : {0.3, 1.7, 4.0}) {
        CHECK(hermite_function(n, -x) == doctest::Approx((n % 2 ? -1.0 : 1.0) * hermite_function(n, x)));
      }
    }
    const double step = 0.01;
    for (int m = 0; m < 6; ++m) {
      for (int n = 0; n < 6; ++n) {
        double s = 0.0;
        for (int j = -2000; j <= 2000; ++j) s += hermite_function(m, j * step) * hermite_function(n, j * step) * step;
        CHECK(s == doctest::Approx(m == n ? 1.0 : 0.0).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("Mehler kernel has geometric Schmidt weights") {
    const double t = 0.5;
    const JointAmplitude f = mehler(t, 256, 24.0);
    const SchmidtData s = schmidt(f);
    for (int k = 0; k < 10; ++k) CHECK(std::abs(s.weights(k) - (1.0 - t * t) * std::pow(t, 2 * k)) < 1e-6);
    CHECK(schmidt_number(s) == doctest::Approx(5.0 / 3.0).epsilon(1e-6));
    CHECK(reconstruction_error(f, s) < 1e-10);
  }

  TEST_CASE("Schmidt identities hold for a generic amplitude") {
    const FrequencyGrid g{{0.0, 10.0, 64}, {1.0, 12.0, 64}};
    JointAmplitude f{g, CMatrix(64, 64)};
    for (int i = 0; i < 64; ++i) {
      for (int j = 0; j < 64; ++j) {
        const double x = g.a.detuning(i);
        const double y = g.b.detuning(j);
        f.values(i, j) = std::exp(-0.3 * x * x - 0.2 * y * y + 0.25 * x * y) * std::polar(1.0, 0.4 * x * y + 0.1 * y * y * y);
      }
    }
    f.normalize();
    CHECK(f.norm2() == doctest::Approx(1.0).epsilon(1e-14));
    const SchmidtData s = schmidt(f);
    CHECK(s.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
    for (Eigen::Index k = 1; k < s.weights.size(); ++k) CHECK(s.weights(k) <= s.weights(k - 1));
    const double K = schmidt_number(s);
    CHECK(K >= 1.0);
    CHECK(purity(s) == doctest::Approx(1.0 / K).epsilon(1e-14));
    CHECK(marginal_g2(s) == doctest::Approx(1.0 + 1.0 / K).epsilon(1e-14));
    const CMatrix gram_a = s.modes_a.adjoint() * s.modes_a * g.a.step();
    const CMatrix gram_b = s.modes_b.adjoint() * s.modes_b * g.b.step();
    CHECK((gram_a - CMatrix::Identity(64, 64)).norm() < 1e-9);
    CHECK((gram_b - CMatrix::Identity(64, 64)).norm() < 1e-9);
    CHECK(reconstruction_error(f, s) < 1e-10);
  }

  TEST_CASE("normalisation rejects empty and non-finite amplitudes") {
    const FrequencyGrid g{{0.0, 1.0, 16}, {0.0, 1.0, 16}};
    JointAmplitude zero{g, CMatrix::Zero(16, 16)};
    CHECK_THROWS_AS(zero.normalize(), PreconditionError);
    JointAmplitude nan{g, CMatrix::Ones(16, 16)};
    nan.values(3, 4) = std::nan("");
    CHECK_THROWS_AS(nan.normalize(), ResolutionError);
  }
}
