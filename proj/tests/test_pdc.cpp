#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tmo/constants.hpp"
#include "tmo/errors.hpp"
#include "tmo/pdc.hpp"

using namespace tmo;

namespace {

constexpr double kU = 2e12;  // 2 / (|D| L) for the default test process

Phasematching gaussian_pm() {
  Phasematching pm;
  pm.model = Phasematching::Model::kGaussian;
  return pm;
}

// Pump rms that makes the Gaussian-phasematched sGVM state separable.
double matched_sigma() { return std::sqrt(2.0) * kU / std::sqrt(2.0 * kGaussianPmGamma * 2.0); }

}  // namespace

TEST_SUITE("pdc") {
  TEST_CASE("Gaussian phasematching shares the sinc half maximum") {
    double lo = 1.0;
    double hi = 3.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (std::sin(mid) / mid > 0.5 ? lo : hi) = mid;
    }
    CHECK(std::exp(-kGaussianPmGamma * lo * lo) == doctest::Approx(0.5).epsilon(2e-3));
  }

  TEST_CASE("phasematching is unity at the centres and pump detuning follows the process") {
    const Process pdc(test::sgvm_pdc());
    const Process sfg(test::sfg(0.0, 1e-10));
    CHECK(std::abs(phasematching_value(pdc, Phasematching{}, 0.0, 0.0) - 1.0) < 1e-15);
    CHECK(pump_detuning(pdc, 1.0, 2.0) == 3.0);
    CHECK(pump_detuning(sfg, 1.0, 2.0) == 1.0);
  }

  TEST_CASE("JSA is normalised on the grid") {
    const Process p(test::sgvm_pdc());
    const auto g = test::square_grid(p.center_a(), p.center_b(), 16 * kU, 128);
    const JointAmplitude f = build_jsa(p, Phasematching{}, PumpSpec::gaussian(p.center_pump(), kU), g);
    CHECK(f.norm2() == doctest::Approx(1.0).epsilon(1e-13));
  }

  TEST_CASE("coarse grids are rejected") {
    const Process p(test::sgvm_pdc());
    const auto g = test::square_grid(p.center_a(), p.center_b(), 64 * kU, 32);
    CHECK_THROWS_AS(build_jsa(p, Phasematching{}, PumpSpec::gaussian(p.center_pump(), kU), g), ResolutionError);
  }

  TEST_CASE("Gaussian product state: K = (r + 1/r) / 2") {
    const Process p(test::sgvm_pdc());
    const auto g = test::square_grid(p.center_a(), p.center_b(), 24 * kU, 256);
    const double s0 = matched_sigma();
    for (double r : {1.0, 2.0, 0.25}) {
      const JointAmplitude f = build_jsa(p, gaussian_pm(), PumpSpec::gaussian(p.center_pump(), s0 * r), g);
      CHECK(schmidt_number(schmidt(f)) == doctest::Approx(0.5 * (r + 1.0 / r)).epsilon(1e-6));
    }
  }

  TEST_CASE("a linear pump phase (delay) leaves the Schmidt weights unchanged") {
    const Process p(test::sgvm_pdc());
    const auto g = test::square_grid(p.center_a(), p.center_b(), 16 * kU, 128);
    PumpSpec pump = PumpSpec::gaussian(p.center_pump(), 1.5 * kU);
    const SchmidtData a = schmidt(build_jsa(p, Phasematching{}, pump, g));
    pump.spectral_phase = {0.7, 2e-13};
    const SchmidtData b = schmidt(build_jsa(p, Phasematching{}, pump, g));
    CHECK((a.weights - b.weights).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("filters: transparent passbands change nothing, opaque ones are errors") {
    TaylorProcess t = test::sgvm_pdc();
    t.walkoff_a = 0.0;
    const Process p(t);
    const FrequencyGrid g{{p.center_a(), 40 * kU, 128}, {p.center_b(), 24 * kU, 128}};
    const JointAmplitude f = build_jsa(p, Phasematching{}, PumpSpec::gaussian(p.center_pump(), 6 * kU), g);
    const FilteredAmplitude open = apply_filter(f, {Passband::rectangular(-1e15, 1e15), Passband{}});
    CHECK(open.transmission == doctest::Approx(1.0));
    CHECK((open.jsa.values - f.values).norm() < 1e-12);
    const FilteredAmplitude narrow = apply_filter(f, {Passband{}, Passband::rectangular(-kPi * kU, kPi * kU)});
    CHECK(narrow.transmission < 1.0);
    CHECK(narrow.jsa.norm2() == doctest::Approx(1.0));
    CHECK_THROWS_AS(apply_filter(f, {Passband::rectangular(1e15, 2e15), Passband{}}), PreconditionError);
    CHECK_THROWS_AS(apply_filter(f, {Passband::rectangular(2.0, 1.0), Passband{}}), PreconditionError);

    const PurityReport r = purity_report(f, {Passband{}, Passband::rectangular(-kPi * kU, kPi * kU)});
    REQUIRE(r.heralded_purity_a);
    CHECK(*r.heralded_purity_a > r.purity);
    CHECK_FALSE(r.heralded_purity_b);
    CHECK(r.g2 == doctest::Approx(1.0 + 1.0 / r.schmidt_number).epsilon(1e-14));
  }

  TEST_CASE("bandwidth sweep reproduces the single-point report") {
    const Process p(test::sgvm_pdc());
    const auto g = test::square_grid(p.center_a(), p.center_b(), 16 * kU, 128);
    const PumpSpec pump = PumpSpec::gaussian(p.center_pump(), 1.2 * kU);
    const auto sweep = purity_vs_bandwidth(p, Phasematching{}, pump, g, {0.8 * kU, 1.2 * kU});
    REQUIRE(sweep.size() == 2);
    CHECK(sweep[1].purity == doctest::Approx(purity_report(p, Phasematching{}, pump, g).purity).epsilon(1e-12));
  }

  TEST_CASE("state engineering needs a symmetric Gaussian-phasematched process") {
    const Process p(test::sgvm_pdc());
    const auto g = test::square_grid(p.center_a(), p.center_b(), 24 * kU, 256);
    const PumpSpec hg1 = PumpSpec::hermite_gauss(p.center_pump(), matched_sigma(), 1);
    const SchmidtData s = engineer_state(hg1, p, gaussian_pm(), g);
    CHECK(s.weights(0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(s.weights(1) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK_THROWS_AS(engineer_state(hg1, p, Phasematching{}, g), PreconditionError);
    TaylorProcess a = test::sgvm_pdc();
    a.walkoff_a = 0.0;
    CHECK_THROWS_AS(engineer_state(hg1, Process(a), gaussian_pm(), g), PreconditionError);
  }
}
