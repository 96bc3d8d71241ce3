#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "support.hpp"

using tmo::test::run_tool;

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("tmo_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& body) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << body;
  return p;
}

int run_config(const fs::path& dir, const std::string& body, const std::string& extra = "") {
  const fs::path cfg = write_config(dir, body);
  return run_tool("--config " + cfg.string() + " --out " + (dir / "out").string() + " " + extra);
}

nlohmann::json summary(const fs::path& dir) {
  std::ifstream in(dir / "out" / "summary.json");
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("flag and config errors exit with 2") {
    CHECK(run_tool("") == 2);
    CHECK(run_tool("--config /nonexistent/config.json") == 2);
    const fs::path dir = scratch("errors");
    CHECK(run_config(dir, R"({"command": "gvm", "processes": []})") == 2);
    CHECK(run_config(dir, R"({"command": "teleport"})") == 2);
    CHECK(run_config(dir, R"({"command": "tomo", "d": 4})") == 2);
    CHECK(run_config(dir, R"({"command": "tomo", "d": 3})", "--format png") == 2);
    CHECK(run_config(dir, "{ not json") == 2);
  }

  TEST_CASE("an under-resolved grid exits with 3") {
    const fs::path dir = scratch("resolution");
    const std::string body = R"({
      "command": "jsa",
      "process": {"model": "taylor", "kind": "pdc", "length_m": 0.01,
                  "walkoff_a_s_per_m": 1e-10, "walkoff_b_s_per_m": -1e-10,
                  "center_pump_nm": 775, "center_a_nm": 1550},
      "phasematching": "sinc",
      "pump": {"bandwidth_rad_s": 3e12},
      "grid": {"points": 16, "span_rad_s": 6e13}
    })";
    CHECK(run_config(dir, body) == 3);
  }

  TEST_CASE("gvm flags degenerate rows instead of failing") {
    const fs::path dir = scratch("gvm");
    const std::string body = R"({
      "command": "gvm",
      "processes": [{"name": "vac", "kind": "pdc", "material": "vacuum", "length_m": 0.01,
                     "poling": "none",
                     "pump": {"wavelength_nm": 775, "axis": "any"},
                     "a": {"wavelength_nm": 1550, "axis": "any"}, "b": {"axis": "any"},
                     "scan": {"detuning_thz": [-1, 0, 1]}}]
    })";
    REQUIRE(run_config(dir, body) == 0);
    const auto s = summary(dir);
    CHECK(s.at("processes").at(0).at("degenerate_rows") == 3);
    CHECK(fs::exists(dir / "out" / "gvm_vac.csv"));
  }

  TEST_CASE("tomo writes one file per mutually unbiased basis") {
    const fs::path dir = scratch("tomo");
    const std::string body = R"({
      "command": "tomo", "d": 5,
      "basis": {"kind": "frequency_bins", "span_thz": 20, "points": 256, "spacing_thz": 2, "width_thz": 1.5},
      "state": {"kind": "random_pure"}
    })";
    REQUIRE(run_config(dir, body, "--seed 3") == 0);
    for (int b = 0; b < 6; ++b) CHECK(fs::exists(dir / "out" / ("mub_" + std::to_string(b) + ".csv")));
    CHECK(summary(dir).at("fidelity").get<double>() > 1.0 - 1e-9);
  }

  TEST_CASE("format selection restricts matrix outputs") {
    const fs::path dir = scratch("format");
    const std::string body = R"({
      "command": "jsa",
      "process": {"model": "taylor", "kind": "pdc", "length_m": 0.01,
                  "walkoff_a_s_per_m": 1e-10, "walkoff_b_s_per_m": -1e-10,
                  "center_pump_nm": 775, "center_a_nm": 1550},
      "phasematching": "gaussian",
      "pump": {"bandwidth_rad_s": 3.2e12},
      "grid": {"points": 64, "span_rad_s": 2.4e13}
    })";
    REQUIRE(run_config(dir, body, "--format csv") == 0);
    CHECK(fs::exists(dir / "out" / "jsa_intensity.csv"));
    CHECK_FALSE(fs::exists(dir / "out" / "jsa.bin"));
    CHECK(summary(dir).at("grid_points") == 64);
    REQUIRE(run_config(dir, body, "--grid 96") == 0);
    CHECK(summary(dir).at("grid_points") == 96);
  }
}
