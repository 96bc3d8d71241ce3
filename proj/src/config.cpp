#include "tmo/config.hpp"

#include <fmt/format.h>

#include "tmo/constants.hpp"
#include "tmo/errors.hpp"
#include "tmo/io.hpp"

namespace tmo {

namespace {

const Json& require(const Json& obj, const std::string& key) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError(fmt::format("missing key '{}'", key));
  return obj.at(key);
}

double number(const Json& obj, const std::string& key) {
  const Json& v = require(obj, key);
  if (!v.is_number()) throw ConfigError(fmt::format("'{}' must be a number", key));
  return v.get<double>();
}

double number_or(const Json& obj, const std::string& key, double fallback) {
  return obj.contains(key) ? number(obj, key) : fallback;
}

std::string text(const Json& obj, const std::string& key) {
  const Json& v = require(obj, key);
  if (!v.is_string()) throw ConfigError(fmt::format("'{}' must be a string", key));
  return v.get<std::string>();
}

ProcessKind parse_kind(const Json& spec) {
  const std::string k = text(spec, "kind");
  if (k == "pdc") return ProcessKind::kPdc;
  if (k == "sfg") return ProcessKind::kSfg;
  throw ConfigError(fmt::format("process kind '{}' is not pdc or sfg", k));
}

cdouble complex_entry(const Json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2) return {v[0].get<double>(), v[1].get<double>()};
  throw ConfigError("complex values are numbers or [re, im] pairs");
}

// Output/idler centre by energy conservation.
double derived_b(ProcessKind kind, double pump, double a) { return kind == ProcessKind::kPdc ? pump - a : a + pump; }

}  // namespace

RunConfig parse_run_config(const std::string& body, const std::filesystem::path& base_dir) {
  RunConfig run;
  try {
    run.doc = Json::parse(body);
  } catch (const Json::exception& e) {
    throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
  }
  run.command = text(run.doc, "command");
  run.base_dir = base_dir;
  if (run.doc.contains("seed")) run.seed = run.doc.at("seed").get<std::uint64_t>();
  if (run.doc.contains("grid") && run.doc.at("grid").contains("points")) {
    run.grid_points = run.doc.at("grid").at("points").get<std::size_t>();
  }
  run.materials_dir = run.doc.contains("materials_dir") ? base_dir / text(run.doc, "materials_dir")
                                                        : default_materials_dir();
  return run;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_text(path), path.parent_path());
}

std::optional<double> read_angular_opt(const Json& obj, const std::string& key) {
  if (!obj.is_object()) return std::nullopt;
  if (obj.contains(key + "_rad_s")) return number(obj, key + "_rad_s");
  if (obj.contains(key + "_thz")) return omega_from_thz(number(obj, key + "_thz"));
  if (obj.contains(key + "_nm")) return omega_from_nm(number(obj, key + "_nm"));
  return std::nullopt;
}

double read_angular(const Json& obj, const std::string& key) {
  if (auto v = read_angular_opt(obj, key)) return *v;
  throw ConfigError(fmt::format("missing '{0}_nm', '{0}_thz' or '{0}_rad_s'", key));
}

double read_detuning(const Json& obj, const std::string& key) {
  if (obj.contains(key + "_rad_s")) return number(obj, key + "_rad_s");
  if (obj.contains(key + "_thz")) return omega_from_thz(number(obj, key + "_thz"));
  throw ConfigError(fmt::format("missing '{0}_thz' or '{0}_rad_s'", key));
}

ProcessGeometry parse_geometry(const Json& spec, const std::filesystem::path& materials_dir) {
  ProcessGeometry g;
  g.kind = parse_kind(spec);
  const std::string material = text(spec, "material");
  g.material = material == "vacuum" ? Material::vacuum() : load_material(materials_dir, material);
  g.length = number(spec, "length_m");
  const Json& pump = require(spec, "pump");
  const Json& a = require(spec, "a");
  const Json& b = require(spec, "b");
  g.pump = {FieldRole::kPump, read_angular(pump, "wavelength"), text(pump, "axis")};
  const bool pdc = g.kind == ProcessKind::kPdc;
  g.a = {pdc ? FieldRole::kSignal : FieldRole::kInput, read_angular(a, "wavelength"), text(a, "axis")};
  g.b = {pdc ? FieldRole::kIdler : FieldRole::kOutput, derived_b(g.kind, g.pump.center, g.a.center),
         text(b, "axis")};
  const Json poling = spec.value("poling", Json("auto"));
  if (poling.is_string() && poling.get<std::string>() == "auto") {
    if (auto s = solve_poling_period(g)) g = with_poling(g, *s);
  } else if (poling.is_object()) {
    g.poling_period = number(poling, "period_m");
    g.qpm_sign = static_cast<int>(number_or(poling, "sign", 1.0));
  } else if (!(poling.is_string() && poling.get<std::string>() == "none")) {
    throw ConfigError("'poling' must be \"auto\", \"none\" or {\"period_m\": ...}");
  }
  return g;
}

Process parse_process(const Json& spec, const std::filesystem::path& materials_dir) {
  const std::string model = spec.value("model", std::string("sellmeier"));
  if (model == "sellmeier") {
    ProcessGeometry g = parse_geometry(spec, materials_dir);
    if (spec.value("linearize", false)) return Process(linearize(g));
    return Process(std::move(g));
  }
  if (model != "taylor") throw ConfigError(fmt::format("process model '{}' is not sellmeier or taylor", model));
  TaylorProcess t;
  t.kind = parse_kind(spec);
  t.length = number(spec, "length_m");
  t.walkoff_a = number(spec, "walkoff_a_s_per_m");
  t.walkoff_b = number(spec, "walkoff_b_s_per_m");
  t.gvd_pump = number_or(spec, "gvd_pump_s2_per_m", 0.0);
  t.gvd_a = number_or(spec, "gvd_a_s2_per_m", 0.0);
  t.gvd_b = number_or(spec, "gvd_b_s2_per_m", 0.0);
  t.center_pump = read_angular(spec, "center_pump");
  t.center_a = read_angular(spec, "center_a");
  t.center_b = derived_b(t.kind, t.center_pump, t.center_a);
  if (spec.contains("poling_period_m")) {
    t.poling_period = number(spec, "poling_period_m");
    t.qpm_sign = static_cast<int>(number_or(spec, "qpm_sign", 1.0));
  }
  if (!(t.length > 0.0)) throw ConfigError("length_m must be positive");
  return Process(t);
}

PumpSpec parse_pump(const Json& spec, double center) {
  PumpSpec p;
  p.center = center;
  const std::string shape = spec.value("shape", std::string("gaussian"));
  if (shape != "custom") p.bandwidth = read_detuning(spec, "bandwidth");
  if (shape == "gaussian") {
    p.kind = PumpSpec::Kind::kGaussian;
  } else if (shape == "hermite_gauss") {
    p.kind = PumpSpec::Kind::kHermiteGauss;
    p.order = static_cast<int>(number(spec, "order"));
  } else if (shape == "time_bins") {
    p.kind = PumpSpec::Kind::kTimeBins;
    p.delays = require(spec, "delays_s").get<std::vector<double>>();
    if (spec.contains("amplitudes")) {
      for (const auto& v : spec.at("amplitudes")) p.amplitudes.push_back(complex_entry(v));
    } else {
      p.amplitudes.assign(p.delays.size(), 1.0 / std::sqrt(static_cast<double>(p.delays.size())));
    }
  } else if (shape == "custom") {
    p.kind = PumpSpec::Kind::kCustom;
    p.custom_detuning = require(spec, "detuning_rad_s").get<std::vector<double>>();
    for (const auto& v : require(spec, "values")) p.custom_values.push_back(complex_entry(v));
  } else {
    throw ConfigError(fmt::format("unknown pump shape '{}'", shape));
  }
  if (spec.contains("spectral_phase")) p.spectral_phase = spec.at("spectral_phase").get<std::vector<double>>();
  try {
    p.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  return p;
}

FrequencyGrid parse_grid(const Json& spec, const Process& process, std::optional<std::size_t> points) {
  const std::size_t n = points ? *points : static_cast<std::size_t>(number(spec, "points"));
  const auto span_a = read_angular_opt(spec, "span_a");
  const auto span_b = read_angular_opt(spec, "span_b");
  const auto span = read_angular_opt(spec, "span");
  if (!span && !(span_a && span_b)) throw ConfigError("grid needs 'span_*' or both 'span_a_*' and 'span_b_*'");
  FrequencyGrid g;
  g.a = {process.center_a(), span_a ? *span_a : *span, n};
  g.b = {process.center_b(), span_b ? *span_b : *span, n};
  return g;
}

Phasematching parse_phasematching(const Json& spec, const Process& process, const RunConfig& run) {
  Phasematching pm;
  const std::string model = spec.is_string() ? spec.get<std::string>() : text(spec, "model");
  if (model == "sinc") return pm;
  if (model == "gaussian") {
    pm.model = Phasematching::Model::kGaussian;
    return pm;
  }
  if (model != "pattern") throw ConfigError(fmt::format("unknown phasematching model '{}'", model));
  pm.model = Phasematching::Model::kPattern;
  const Json& pat = require(spec, "pattern");
  if (pat.contains("file")) {
    pm.pattern = pattern_from_json(read_text(run.base_dir / text(pat, "file")));
    return pm;
  }
  std::optional<double> period;
  if (auto* g = process.geometry()) period = g->poling_period;
  if (auto* t = process.taylor()) period = t->poling_period;
  if (!period) throw ConfigError("pattern phasematching needs a poling period on the process");
  if (pat.contains("periodic")) {
    pm.pattern = periodic_pattern(*period, process.length(), number_or(pat.at("periodic"), "duty", 0.5));
  } else if (pat.contains("apodize")) {
    const Json& ap = pat.at("apodize");
    TargetEnvelope target;
    target.center = kTwoPi / *period;
    target.width = number(ap, "width_rad_per_m");
    ApodizeOptions opt;
    opt.min_domain = number_or(ap, "min_domain_m", 1e-6);
    const std::uint64_t seed = ap.contains("seed") ? ap.at("seed").get<std::uint64_t>() : run.seed;
    pm.pattern = apodize(target, process.length(), *period, seed, opt).pattern;
  } else {
    throw ConfigError("pattern needs 'file', 'periodic' or 'apodize'");
  }
  return pm;
}

Passband parse_passband(const Json& spec) {
  const std::string kind = spec.value("kind", std::string("none"));
  if (kind == "none") return {};
  if (kind == "rectangular") return Passband::rectangular(read_detuning(spec, "lo"), read_detuning(spec, "hi"));
  if (kind == "gaussian") {
    return Passband::gaussian(spec.contains("center_rad_s") || spec.contains("center_thz") ? read_detuning(spec, "center") : 0.0,
                              read_detuning(spec, "sigma"));
  }
  throw ConfigError(fmt::format("unknown passband kind '{}'", kind));
}

FilterSpec parse_filters(const Json& spec) {
  FilterSpec f;
  if (spec.contains("a")) f.a = parse_passband(spec.at("a"));
  if (spec.contains("b")) f.b = parse_passband(spec.at("b"));
  return f;
}

}  // namespace tmo
