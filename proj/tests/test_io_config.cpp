#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "support.hpp"
#include "tmo/config.hpp"
#include "tmo/constants.hpp"
#include "tmo/errors.hpp"
#include "tmo/io.hpp"

using namespace tmo;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("tmo_io_" + name);
  std::filesystem::create_directories(dir);
  return dir;
}

const char* kTaylorPdc = R"({
  "command": "jsa",
  "process": {"model": "taylor", "kind": "pdc", "length_m": 0.01,
              "walkoff_a_s_per_m": 1e-10, "walkoff_b_s_per_m": -1e-10,
              "center_pump_nm": 775, "center_a_nm": 1550},
  "pump": {"shape": "time_bins", "bandwidth_rad_s": 1e12, "delays_s": [0, 5e-12, 1e-11]},
  "grid": {"points": 64, "span_thz": 2}
})";

}  // namespace

TEST_SUITE("io_config") {
  TEST_CASE("shortest round-trip number formatting") {
    for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0}) {
      CHECK(std::stod(format_double(x)) == x);
    }
    CHECK(format_double(0.5) == "0.5");
  }

  TEST_CASE("complex binary matrices round trip bit-exactly") {
    const auto dir = scratch_dir("bin");
    CMatrix m(3, 2);
    m << cdouble(1, 2), cdouble(-0.5, 1e-300), cdouble(3, 4), cdouble(0, -1), cdouble(1.0 / 3.0, 7), cdouble(8, 9);
    write_complex_binary(dir / "m.bin", m);
    CHECK(std::filesystem::file_size(dir / "m.bin") == 6 * 16);
    CHECK(read_complex_binary(dir / "m.bin", 3, 2) == m);
    CHECK(complex_matrix_from_json(complex_matrix_json(m)) == m);
  }

  TEST_CASE("PGM header carries columns then rows") {
    const auto dir = scratch_dir("pgm");
    RMatrix m = RMatrix::Zero(3, 5);
    m(1, 2) = 4.0;
    write_pgm16(dir / "m.pgm", m);
    std::ifstream in(dir / "m.pgm", std::ios::binary);
    std::string magic;
    int w = 0;
    int h = 0;
    int max = 0;
    in >> magic >> w >> h >> max;
    CHECK(magic == "P5");
    CHECK(w == 5);
    CHECK(h == 3);
    CHECK(max == 65535);
  }

  TEST_CASE("sidecar describes the axes") {
    const FrequencyGrid g{{1e15, 2e13, 64}, {1.1e15, 3e13, 64}};
    const Json j = Json::parse(grid_sidecar(g, "jsa", "jsa.bin", "unit"));
    CHECK(j.at("rows") == 64);
    CHECK(j.at("axis_cols").at("span_rad_s").get<double>() == 3e13);
    CHECK(j.at("axis_rows").at("first_detuning_rad_s").get<double>() == g.a.detuning(0));
  }

  TEST_CASE("run configs: parsing, units and defaults") {
    const RunConfig run = parse_run_config(kTaylorPdc, ".");
    CHECK(run.command == "jsa");
    CHECK(run.seed == 0);
    const Process p = parse_process(run.doc.at("process"), run.materials_dir);
    CHECK(p.center_a() == doctest::Approx(omega_from_nm(1550.0)));
    CHECK(p.center_b() == doctest::Approx(omega_from_nm(775.0) - omega_from_nm(1550.0)));
    const PumpSpec pump = parse_pump(run.doc.at("pump"), p.center_pump());
    REQUIRE(pump.amplitudes.size() == 3);
    CHECK(std::norm(pump.amplitudes[0]) == doctest::Approx(1.0 / 3.0));
    const FrequencyGrid g = parse_grid(run.doc.at("grid"), p, 128);
    CHECK(g.a.points == 128);
    CHECK(g.a.span == doctest::Approx(omega_from_thz(2.0)));
  }

  TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_run_config("{\"seed\": 1}", "."), ConfigError);
    CHECK_THROWS_AS(parse_run_config("{not json", "."), ConfigError);
    const RunConfig run = parse_run_config(kTaylorPdc, ".");
    Json bad = run.doc.at("process");
    bad["model"] = "lookup";
    CHECK_THROWS_AS(parse_process(bad, run.materials_dir), ConfigError);
    bad = run.doc.at("process");
    bad.erase("center_a_nm");
    CHECK_THROWS_AS(parse_process(bad, run.materials_dir), ConfigError);
    const Process p = parse_process(run.doc.at("process"), run.materials_dir);
    CHECK_THROWS_AS(parse_phasematching(Json::parse(R"({"model": "pattern", "pattern": {"periodic": {}}})"), p, run),
                    ConfigError);
    CHECK_THROWS_AS(parse_pump(Json::parse(R"({"shape": "square", "bandwidth_thz": 1})"), 1e15), ConfigError);
    CHECK_THROWS_AS(parse_passband(Json::parse(R"({"kind": "comb"})")), ConfigError);
  }

  TEST_CASE("Sellmeier processes solve their own poling period") {
    const Json spec = Json::parse(R"({
      "kind": "sfg", "material": "lnb_congruent", "length_m": 0.01,
      "pump": {"wavelength_nm": 875, "axis": "e"},
      "a": {"wavelength_nm": 1550, "axis": "o"},
      "b": {"axis": "o"}})");
    const ProcessGeometry g = parse_geometry(spec, test::kMaterials);
    REQUIRE(g.poling_period);
    CHECK(std::abs(phase_mismatch(g, g.a.center, g.b.center)) < 1e-6);
    Json none = spec;
    none["poling"] = "none";
    CHECK_FALSE(parse_geometry(none, test::kMaterials).poling_period);
    Json missing = spec;
    missing["material"] = "unobtainium";
    CHECK_THROWS_AS(parse_geometry(missing, test::kMaterials), ConfigError);
  }
}
