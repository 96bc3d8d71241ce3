#include <doctest.h>

#include "support.hpp"
#include "tmo/constants.hpp"
#include "tmo/errors.hpp"

using namespace tmo;

namespace {

ProcessGeometry ktp_type2() {
  ProcessGeometry g;
  g.kind = ProcessKind::kPdc;
  g.material = load_material(test::kMaterials, "ktp");
  g.length = 0.01;
  g.pump = {FieldRole::kPump, omega_from_nm(775.0), "y"};
  g.a = {FieldRole::kSignal, omega_from_nm(1550.0), "y"};
  g.b = {FieldRole::kIdler, g.pump.center - g.a.center, "z"};
  return g;
}

ProcessGeometry ln_type2_sfg() {
  ProcessGeometry g;
  g.kind = ProcessKind::kSfg;
  g.material = load_material(test::kMaterials, "lnb_congruent");
  g.length = 0.01;
  g.pump = {FieldRole::kPump, omega_from_nm(875.0), "e"};
  g.a = {FieldRole::kInput, omega_from_nm(1550.0), "o"};
  g.b = {FieldRole::kOutput, g.a.center + g.pump.center, "o"};
  return g;
}

}  // namespace

TEST_SUITE("dispersion") {
  TEST_CASE("KTP n_z at 1550 nm matches the Kato-Takaoka value") {
    const Material ktp = load_material(test::kMaterials, "ktp");
    CHECK(refractive_index(ktp, "z", omega_from_nm(1550.0)) == doctest::Approx(1.8157731108).epsilon(1e-9));
  }

  TEST_CASE("group index agrees with a finite difference of k(w)") {
    const Material ln = load_material(test::kMaterials, "lnb_congruent");
    for (double nm : {600.0, 875.0, 1550.0, 3000.0}) {
      const double w = omega_from_nm(nm);
      const double h = w * 1e-5;
      const double dk = (wavenumber(ln, "e", w + h) - wavenumber(ln, "e", w - h)) / (2.0 * h);
      CHECK(group_index(ln, "e", w) == doctest::Approx(dk * kSpeedOfLight).epsilon(1e-8));
    }
  }

  TEST_CASE("vacuum has unit index and degenerate contrast") {
    const Material v = Material::vacuum();
    CHECK(refractive_index(v, "any", 1e15) == 1.0);
    ProcessGeometry g = ktp_type2();
    g.material = v;
    g.pump.axis = g.a.axis = g.b.axis = "any";
    CHECK(gvm_contrast(g).degenerate);
  }

  TEST_CASE("wavelengths outside the tabulated range are rejected") {
    const Material ktp = load_material(test::kMaterials, "ktp");
    CHECK_THROWS_AS(refractive_index(ktp, "z", omega_from_nm(300.0)), RangeError);
    CHECK_THROWS_AS(refractive_index(ktp, "q", omega_from_nm(1000.0)), StructureError);
  }

  TEST_CASE("solved poling period cancels the centre mismatch") {
    for (const ProcessGeometry& raw : {ktp_type2(), ln_type2_sfg()}) {
      const auto s = solve_poling_period(raw);
      REQUIRE(s);
      const ProcessGeometry g = with_poling(raw, *s);
      CHECK(std::abs(phase_mismatch(g, g.a.center, g.b.center) * g.length) < 1e-6);
    }
  }

  TEST_CASE("poling periods of the reference processes") {
    // Type-II KTP at 775 -> 1550 nm needs a long period; LN type-II SFG about 4.4 um.
    CHECK(solve_poling_period(ktp_type2())->period == doctest::Approx(45.0e-6).epsilon(0.02));
    CHECK(solve_poling_period(ln_type2_sfg())->period == doctest::Approx(4.4e-6).epsilon(0.01));
  }

  TEST_CASE("exchanging the two generated fields inverts xi") {
    const ProcessGeometry g = ktp_type2();
    ProcessGeometry s = g;
    std::swap(s.a.center, s.b.center);
    std::swap(s.a.axis, s.b.axis);
    CHECK(gvm_contrast(s).xi == doctest::Approx(1.0 / gvm_contrast(g).xi).epsilon(1e-12));
  }

  TEST_CASE("contrast angle is -atan(xi)") {
    const GvmContrast c = gvm_from_walkoff(2e-12, -1e-12);
    CHECK(c.xi == doctest::Approx(-2.0));
    CHECK(c.theta_pm_deg == doctest::Approx(std::atan(2.0) * 180.0 / kPi));
    CHECK(gvm_from_walkoff(1e-12, 0.0).degenerate);
  }

  TEST_CASE("gvm scan keeps the pump fixed and records range failures") {
    const auto rows = gvm_scan(ktp_type2(), {-1e15, 0.0, 1e13});
    REQUIRE(rows.size() == 3);
    CHECK_FALSE(rows[0].value);
    CHECK_FALSE(rows[0].error.empty());
    REQUIRE(rows[1].value);
    CHECK(rows[1].value->xi == doctest::Approx(gvm_contrast(ktp_type2()).xi));
  }

  TEST_CASE("Taylor model tracks the exact mismatch near the centres") {
    ProcessGeometry g = ktp_type2();
    g = with_poling(g, *solve_poling_period(g));
    const Process exact(g);
    const Process taylor(linearize(g));
    for (double d : {-2e12, -5e11, 5e11, 2e12}) {
      const double e = exact.mismatch(d, 0.3 * d);
      const double t = taylor.mismatch(d, 0.3 * d);
      CHECK(std::abs(e - t) < 1e-3 * std::abs(e) + 1e-3);
    }
    CHECK(taylor.gvm().xi == doctest::Approx(exact.gvm().xi).epsilon(1e-9));
  }

  TEST_CASE("comoving pump wavenumber has no linear term") {
    ProcessGeometry g = ktp_type2();
    const Process p(with_poling(g, *solve_poling_period(g)));
    const double h = 1e9;
    const double slope = (p.comoving_wavenumber(Process::Field::kPump, h) -
                          p.comoving_wavenumber(Process::Field::kPump, -h)) / (2.0 * h);
    CHECK(std::abs(slope) < 1e-15);
  }
}
