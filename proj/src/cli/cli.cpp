#include "tmo/cli.hpp"

#include <cstdio>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "commands.hpp"
#include "tmo/constants.hpp"
#include "tmo/errors.hpp"
#include "tmo/io.hpp"

namespace tmo::cli {

std::string csv_line(const std::vector<double>& values) {
  std::string line;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k > 0) line += ',';
    line += format_double(values[k]);
  }
  line += '\n';
  return line;
}

std::vector<double> linspace(double from, double to, std::size_t points) {
  if (points == 0) throw ConfigError("a range needs at least one point");
  if (points == 1) return {from};
  std::vector<double> v(points);
  for (std::size_t k = 0; k < points; ++k) {
    v[k] = from + (to - from) * static_cast<double>(k) / static_cast<double>(points - 1);
  }
  return v;
}

std::vector<double> read_values(const Json& spec, const std::string& key, double scale) {
  if (!spec.contains(key)) throw ConfigError(fmt::format("missing key '{}'", key));
  const Json& v = spec.at(key);
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& x : v) out.push_back(x.get<double>() * scale);
  } else if (v.is_object()) {
    for (double x : linspace(v.at("from").get<double>(), v.at("to").get<double>(), v.at("points").get<std::size_t>())) {
      out.push_back(x * scale);
    }
  } else {
    throw ConfigError(fmt::format("'{}' must be a list or {{\"from\", \"to\", \"points\"}}", key));
  }
  return out;
}

std::vector<double> read_detuning_values(const Json& spec, const std::string& key) {
  if (spec.contains(key + "_thz")) return read_values(spec, key + "_thz", omega_from_thz(1.0));
  if (spec.contains(key + "_rad_s")) return read_values(spec, key + "_rad_s");
  throw ConfigError(fmt::format("missing '{0}_thz' or '{0}_rad_s'", key));
}

std::string weights_csv(const RVector& weights) {
  std::string s = "k,lambda\n";
  for (Eigen::Index k = 0; k < weights.size(); ++k) {
    s += fmt::format("{},{}\n", k, format_double(weights(k)));
  }
  return s;
}

Pipeline load_pipeline(const Context& ctx) {
  const Json& doc = ctx.run.doc;
  if (!doc.contains("process")) throw ConfigError("missing key 'process'");
  Process process = parse_process(doc.at("process"), ctx.run.materials_dir);
  if (!doc.contains("pump")) throw ConfigError("missing key 'pump'");
  PumpSpec pump = parse_pump(doc.at("pump"), process.center_pump());
  if (!doc.contains("grid")) throw ConfigError("missing key 'grid'");
  FrequencyGrid grid = parse_grid(doc.at("grid"), process, ctx.run.grid_points);
  Phasematching pm = parse_phasematching(doc.value("phasematching", Json("sinc")), process, ctx.run);
  return {std::move(process), std::move(pump), grid, std::move(pm)};
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

void write_matrix(const Context& ctx, const std::string& stem, const CMatrix& m, const FrequencyGrid& grid,
                  const std::string& kind, const std::string& normalization) {
  if (ctx.wants(Format::kBin)) {
    write_complex_binary(ctx.file(stem + ".bin"), m);
    write_text(ctx.file(stem + ".json"), grid_sidecar(grid, kind, stem + ".bin", normalization));
  }
  if (ctx.wants(Format::kPgm)) write_pgm16(ctx.file(stem + ".pgm"), m.cwiseAbs2());
  if (ctx.format == Format::kCsv) {
    std::string s;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      std::vector<double> row(static_cast<std::size_t>(m.cols()));
      for (Eigen::Index c = 0; c < m.cols(); ++c) row[static_cast<std::size_t>(c)] = std::norm(m(r, c));
      s += csv_line(row);
    }
    write_text(ctx.file(stem + "_intensity.csv"), s);
  }
  if (ctx.format == Format::kJson) write_text(ctx.file(stem + "_matrix.json"), complex_matrix_json(m) + "\n");
}

namespace {

using Handler = void (*)(const Context&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"gvm", cmd_gvm}, {"jsa", cmd_jsa}, {"qpg", cmd_qpg}, {"tomo", cmd_tomo}, {"poling", cmd_poling}};
  return h;
}

int run(const std::string& config, const std::string& out, std::optional<std::uint64_t> seed,
        std::optional<std::size_t> grid, const std::string& format) {
  Context ctx;
  ctx.run = load_run_config(config);
  if (seed) ctx.run.seed = *seed;
  if (grid) ctx.run.grid_points = *grid;
  static const std::map<std::string, Format> formats = {{"", Format::kAll},      {"csv", Format::kCsv},
                                                        {"json", Format::kJson}, {"pgm", Format::kPgm},
                                                        {"bin", Format::kBin}};
  ctx.format = formats.at(format);
  if (!out.empty()) {
    ctx.out = out;
  } else if (ctx.run.doc.contains("out")) {
    ctx.out = ctx.run.base_dir / ctx.run.doc.at("out").get<std::string>();
  } else {
    ctx.out = "out";
  }
  std::error_code ec;
  std::filesystem::create_directories(ctx.out, ec);
  if (ec || !std::filesystem::is_directory(ctx.out)) {
    throw ConfigError(fmt::format("cannot create output directory '{}'", ctx.out.string()));
  }
  const auto it = handlers().find(ctx.run.command);
  if (it == handlers().end()) throw ConfigError(fmt::format("unknown command '{}'", ctx.run.command));
  it->second(ctx);
  return 0;
}

}  // namespace

}  // namespace tmo::cli

namespace tmo {

int run_cli(int argc, char** argv) {
  CLI::App app{"Temporal-mode optics toolkit: runs one declarative JSON config."};
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> grid;
  std::string format;
  app.add_option("--config", config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out, "output directory (overrides the config's 'out')");
  app.add_option("--seed", seed, "random seed (overrides the config's 'seed')");
  app.add_option("--grid", grid, "grid points per axis (overrides grid.points)")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "restrict matrix artifacts to one format")
      ->check(CLI::IsMember({"csv", "json", "pgm", "bin"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return cli::run(config, out, seed, grid, format);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << '\n';
  } catch (const StructureError& e) {
    std::cerr << "structure error: " << e.what() << '\n';
  } catch (const RangeError& e) {
    std::cerr << "out of range: " << e.what() << '\n';
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
  } catch (const ResolutionError& e) {
    std::cerr << "resolution error: " << e.what() << '\n';
    return 3;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

}  // namespace tmo
