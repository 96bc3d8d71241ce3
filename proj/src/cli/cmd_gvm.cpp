#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "commands.hpp"
#include "tmo/constants.hpp"
#include "tmo/errors.hpp"
#include "tmo/io.hpp"

namespace tmo::cli {

// One CSV per process: xi against the detuning of field a, pump fixed.
void cmd_gvm(const Context& ctx) {
  const Json& doc = ctx.run.doc;
  if (!doc.contains("processes") || !doc.at("processes").is_array() || doc.at("processes").empty()) {
    throw ConfigError("gvm needs a non-empty 'processes' list");
  }
  Json summary = Json::object();
  summary["command"] = "gvm";
  summary["processes"] = Json::array();
  for (const Json& spec : doc.at("processes")) {
    const std::string name = spec.at("name").get<std::string>();
    if (name.empty() || name.find_first_of("/\\") != std::string::npos) {
      throw ConfigError(fmt::format("process name '{}' is not a plain file stem", name));
    }
    const ProcessGeometry g = parse_geometry(spec, ctx.run.materials_dir);
    std::vector<double> detunings = spec.contains("scan") ? read_detuning_values(spec.at("scan"), "detuning")
                                                          : std::vector<double>{0.0};
    std::sort(detunings.begin(), detunings.end());
    const auto samples = gvm_scan(g, detunings);

    std::string csv = "detuning_rad_s,wavelength_a_nm,wavelength_b_nm,xi,theta_pm_deg,status\n";
    Json crossings = Json::array();
    std::optional<std::pair<double, double>> last;  // (detuning, xi)
    std::size_t degenerate = 0;
    for (const auto& s : samples) {
      const double wa = g.a.center + s.detuning;
      const double wb = g.kind == ProcessKind::kPdc ? g.pump.center - wa : wa + g.pump.center;
      std::string status = "ok";
      std::string xi;
      std::string theta;
      if (!s.value) {
        status = "out_of_range";
        last.reset();
      } else if (s.value->degenerate) {
        status = "degenerate";
        ++degenerate;
        last.reset();
      } else {
        xi = format_double(s.value->xi);
        theta = format_double(s.value->theta_pm_deg);
        if (last && (last->second < 0.0) != (s.value->xi < 0.0)) {
          const double t = last->second / (last->second - s.value->xi);
          const double d = last->first + t * (s.detuning - last->first);
          crossings.push_back({{"detuning_rad_s", d}, {"wavelength_a_nm", nm_from_omega(g.a.center + d)}});
        }
        last = std::make_pair(s.detuning, s.value->xi);
      }
      csv += fmt::format("{},{},{},{},{},{}\n", format_double(s.detuning), format_double(nm_from_omega(wa)),
                         format_double(nm_from_omega(wb)), xi, theta, status);
    }
    write_text(ctx.file("gvm_" + name + ".csv"), csv);

    Json entry = {{"name", name}, {"samples", samples.size()}, {"degenerate_rows", degenerate},
                  {"xi_zero_crossings", crossings}};
    if (g.poling_period) entry["poling_period_m"] = *g.poling_period;
    try {
      const GvmContrast c = gvm_contrast(g);
      entry["xi_center"] = c.degenerate ? Json(nullptr) : Json(c.xi);
      entry["degenerate_center"] = c.degenerate;
    } catch (const RangeError& e) {
      entry["center_error"] = e.what();
    }
    summary["processes"].push_back(entry);
  }
  write_json(ctx.file("summary.json"), summary);
}

}  // namespace tmo::cli
