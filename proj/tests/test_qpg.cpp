#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <random>

#include <Eigen/SVD>

#include "support.hpp"
#include "tmo/constants.hpp"
#include "tmo/errors.hpp"
#include "tmo/qpg.hpp"

using namespace tmo;

namespace {

constexpr double kSigma = 1e12;

struct Setup {
  Process process;
  PumpSpec pump;
  FrequencyGrid grid;
  Phasematching pm;
};

// Small asymmetric QPG: output walk-off 8 / sigma over the crystal.
Setup small_qpg(std::size_t n = 64) {
  Process p(test::sfg(0.0, 8e-10));
  PumpSpec pump = PumpSpec::gaussian(p.center_pump(), kSigma);
  FrequencyGrid g = test::square_grid(p.center_a(), p.center_b(), 10 * kSigma, n);
  return {p, pump, g, Phasematching{}};
}

double relative_error(const CMatrix& a, const CMatrix& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST_SUITE("qpg") {
  TEST_CASE("efficiency bookkeeping") {
    const auto eta = low_gain_efficiencies(std::vector<double>{0.81, 0.19}, kPi / 2.0);
    CHECK(eta[0] == doctest::Approx(std::pow(std::sin(0.9 * kPi / 2.0), 2)));
    CHECK(selectivity({0.0, 0.0}) == 0.0);
    CHECK(separability({0.5, 0.25, 0.25}, 0, 1) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(separability({0.5, 0.25}, 0, 2), PreconditionError);
    CHECK_THROWS_AS(selectivity({}), PreconditionError);
    CHECK(extinction_ratio({0.5, 0.0, 0.0}, 0).infinite);
    CHECK(extinction_ratio({0.5, 0.05}, 0).db == doctest::Approx(10.0));
    CHECK_THROWS_AS(low_gain_efficiencies(std::vector<double>{1.0}, -0.1), PreconditionError);
  }

  TEST_CASE("selectivity never exceeds the leading efficiency") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> eta(1 + trial % 9);
      for (double& e : eta) e = u(rng);
      std::sort(eta.rbegin(), eta.rend());
      CHECK(selectivity(eta) <= eta[0] + 1e-15);
    }
  }

  TEST_CASE("transfer functions need sum-frequency generation") {
    const Process pdc(test::sgvm_pdc());
    const auto g = test::square_grid(pdc.center_a(), pdc.center_b(), 16e12, 64);
    CHECK_THROWS_AS(build_transfer(pdc, Phasematching{}, PumpSpec::gaussian(pdc.center_pump(), 1e12), g),
                    PreconditionError);
  }

  TEST_CASE("Green's functions are unitary and conserve photon number per input") {
    const Setup s = small_qpg();
    const GreensFunctions g = solve_heisenberg(s.process, s.pm, s.pump, 1.3, s.grid);
    CHECK(g.complete());
    CHECK(g.unitarity_error() <= 1e-6);
    for (Eigen::Index c = 0; c < g.aa.cols(); ++c) {
      CHECK(g.aa.col(c).squaredNorm() + g.ca.col(c).squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));
    }
    const GreensFunctions in = solve_heisenberg(s.process, s.pm, s.pump, 1.3, s.grid, {200, true});
    CHECK_FALSE(in.complete());
    CHECK((in.ca - g.ca).norm() < 1e-12);
  }

  TEST_CASE("low-gain limit reproduces the first-order transfer function") {
    const Setup s = small_qpg();
    const double theta = 0.1;
    const GreensFunctions g = solve_heisenberg(s.process, s.pm, s.pump, theta, s.grid);
    const CMatrix unit = first_order_transfer(s.process, s.pm, s.pump, s.grid, 200, 1.0);
    CHECK(relative_error(g.ca, theta * unit / unit.norm()) <= 1e-2);
    // Singular values follow sin(sqrt(lambda) theta).
    const RVector sv = Eigen::BDCSVD<CMatrix>(unit).singularValues();
    const auto eta = g.efficiencies();
    for (int k = 0; k < 4; ++k) {
      const double lambda = std::pow(sv(k) / unit.norm(), 2);
      CHECK(std::sqrt(eta[k]) == doctest::Approx(std::sin(std::sqrt(lambda) * theta)).epsilon(1e-3));
    }
  }

  TEST_CASE("first-order transfer agrees with the analytic transfer modes") {
    const Setup s = small_qpg(128);
    const CMatrix unit = first_order_transfer(s.process, s.pm, s.pump, s.grid, 400, 1.0);
    const SchmidtData ref = operation_schmidt(build_transfer(s.process, s.pm, s.pump, s.grid));
    const RVector sv = Eigen::BDCSVD<CMatrix>(unit).singularValues();
    for (int k = 0; k < 3; ++k) {
      CHECK(std::pow(sv(k) / unit.norm(), 2) == doctest::Approx(ref.weights(k)).epsilon(2e-2));
    }
  }

  TEST_CASE("time gauge is a unitary change of basis") {
    const Setup s = small_qpg();
    const GreensFunctions g = solve_heisenberg(s.process, s.pm, s.pump, 0.9, s.grid);
    const GreensFunctions t = g.to_time_gauge();
    CHECK(t.gauge == GreensFunctions::Gauge::kTime);
    const auto a = g.efficiencies();
    const auto b = t.efficiencies();
    for (int k = 0; k < 5; ++k) CHECK(b[k] == doctest::Approx(a[k]).epsilon(1e-10));
    CHECK(t.unitarity_error() <= 1e-6);
  }

  TEST_CASE("solver preconditions") {
    const Setup s = small_qpg();
    CHECK_THROWS_AS(solve_heisenberg(s.process, s.pm, s.pump, 0.5, s.grid, {50}), PreconditionError);
    FrequencyGrid uneven = s.grid;
    uneven.b.span *= 1.5;
    CHECK_THROWS_AS(solve_heisenberg(s.process, s.pm, s.pump, 0.5, uneven), PreconditionError);
    Phasematching pattern;
    pattern.model = Phasematching::Model::kPattern;
    CHECK_THROWS_AS(solve_heisenberg(s.process, pattern, s.pump, 0.5, s.grid), PreconditionError);
    const Process far(test::sfg(0.0, 2e-8));
    CHECK_THROWS_AS(solve_heisenberg(far, s.pm, s.pump, 0.5, s.grid), ResolutionError);
    CHECK_THROWS_AS(solve_heisenberg(s.process, s.pm, s.pump, 200.0, s.grid, {100}), ConvergenceError);
    CHECK_THROWS_AS(solve_heisenberg(s.process, s.pm, s.pump, -1.0, s.grid), PreconditionError);
  }

  TEST_CASE("saturation sweep and efficiency targeting") {
    const Setup s = small_qpg();
    const auto sweep = saturation_sweep(s.process, s.pm, s.pump, {0.0, 0.5, 1.5}, s.grid);
    REQUIRE(sweep.size() == 3);
    CHECK(sweep[0].eta0 == 0.0);
    CHECK(sweep[2].pump_energy_rel == doctest::Approx(1.5 * 1.5 / (kPi * kPi / 4.0)));
    for (const auto& x : sweep) CHECK(x.selectivity <= x.eta0 + 1e-15);
    const double theta = theta_for_efficiency(s.process, s.pm, s.pump, s.grid, 0.5);
    const auto eta = solve_heisenberg(s.process, s.pm, s.pump, theta, s.grid).efficiencies();
    CHECK(eta[0] == doctest::Approx(0.5).epsilon(1e-4));
  }

  TEST_CASE("interferometer composition") {
    const Setup s = small_qpg();
    const double theta = theta_for_efficiency(s.process, s.pm, s.pump, s.grid, 0.5);
    const GreensFunctions stage = solve_heisenberg(s.process, s.pm, s.pump, theta, s.grid);
    const GreensFunctions both = tmi_compose(stage, 0.3);
    CHECK(both.unitarity_error() <= 1e-6);
    const TmiScan scan = optimize_tmi(stage, 36);
    CHECK(scan.best_selectivity >= selectivity(stage.efficiencies()));
    CHECK(scan.best_selectivity <= scan.best_eta0 + 1e-12);
    CHECK(scan.destructive_eta0 < scan.best_eta0);
    const GreensFunctions weak = solve_heisenberg(s.process, s.pm, s.pump, 0.2, s.grid);
    CHECK_THROWS_AS(tmi_compose(weak, 0.0), PreconditionError);
    const GreensFunctions half = solve_heisenberg(s.process, s.pm, s.pump, theta, s.grid, {200, true});
    CHECK_THROWS_AS(tmi_compose(half, 0.0), PreconditionError);
  }
}
