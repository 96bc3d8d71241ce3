#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "tmo/dispersion.hpp"
#include "tmo/grid.hpp"
#include "tmo/pdc.hpp"
#include "tmo/pump.hpp"

namespace tmo {

using Json = nlohmann::json;

/// One declarative run: the parsed document plus the command-line overrides.
struct RunConfig {
  std::string command;
  Json doc;
  std::filesystem::path base_dir;  // relative paths in the document resolve here
  std::uint64_t seed = 0;
  std::optional<std::size_t> grid_points;
  std::filesystem::path materials_dir;
};

/// Throws ConfigError on unreadable files, malformed JSON, or a missing `command`.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir);

/// Angular frequency from `<key>_rad_s`, `<key>_thz`, or a wavelength `<key>_nm`.
double read_angular(const Json& obj, const std::string& key);
std::optional<double> read_angular_opt(const Json& obj, const std::string& key);

/// Detuning-like quantity from `<key>_rad_s` or `<key>_thz` (no wavelength form).
double read_detuning(const Json& obj, const std::string& key);

Process parse_process(const Json& spec, const std::filesystem::path& materials_dir);
ProcessGeometry parse_geometry(const Json& spec, const std::filesystem::path& materials_dir);
PumpSpec parse_pump(const Json& spec, double center);
FrequencyGrid parse_grid(const Json& spec, const Process& process, std::optional<std::size_t> points);
Phasematching parse_phasematching(const Json& spec, const Process& process, const RunConfig& run);
Passband parse_passband(const Json& spec);
FilterSpec parse_filters(const Json& spec);

}  // namespace tmo
