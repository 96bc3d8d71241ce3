#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tmo/config.hpp"

namespace tmo::cli {

enum class Format { kAll, kCsv, kJson, kPgm, kBin };

struct Context {
  RunConfig run;
  std::filesystem::path out;
  Format format = Format::kAll;

  bool wants(Format f) const { return format == Format::kAll || format == f; }
  std::filesystem::path file(const std::string& name) const { return out / name; }
};

void cmd_gvm(const Context& ctx);
void cmd_jsa(const Context& ctx);
void cmd_qpg(const Context& ctx);
void cmd_tomo(const Context& ctx);
void cmd_poling(const Context& ctx);

/// process / pump / grid / phasematching sections shared by jsa and qpg.
struct Pipeline {
  Process process;
  PumpSpec pump;
  FrequencyGrid grid;
  Phasematching pm;
};
Pipeline load_pipeline(const Context& ctx);

// Shared helpers.
std::string csv_line(const std::vector<double>& values);
std::vector<double> linspace(double from, double to, std::size_t points);
/// spec[key] as an explicit list or {"from", "to", "points"}, times `scale`.
std::vector<double> read_values(const Json& spec, const std::string& key, double scale = 1.0);
/// Detuning list from `<key>_thz` or `<key>_rad_s`.
std::vector<double> read_detuning_values(const Json& spec, const std::string& key);
/// Schmidt weights as "k,lambda_k" rows.
std::string weights_csv(const RVector& weights);
/// Matrix artifacts in the requested formats under `stem` (.bin + .json sidecar, .pgm, .csv of |m|^2).
void write_matrix(const Context& ctx, const std::string& stem, const CMatrix& m, const FrequencyGrid& grid,
                  const std::string& kind, const std::string& normalization);
void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace tmo::cli
