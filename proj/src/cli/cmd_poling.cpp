#include <cmath>

#include <fmt/format.h>

#include "commands.hpp"
#include "tmo/constants.hpp"
#include "tmo/errors.hpp"
#include "tmo/io.hpp"
#include "tmo/poling.hpp"

namespace tmo::cli {

void cmd_poling(const Context& ctx) {
  const Json& doc = ctx.run.doc;
  const double length = doc.at("length_m").get<double>();
  const double period = doc.at("period_m").get<double>();
  if (!(length > 0.0) || !(period > 0.0)) throw ConfigError("length_m and period_m must be positive");
  const double center = kTwoPi / period;
  const Json target_spec = doc.value("target", Json{{"kind", "periodic"}});
  const std::string kind = target_spec.value("kind", std::string("periodic"));

  Json summary = {{"command", "poling"}, {"length_m", length}, {"period_m", period}, {"target", kind}};
  PolingPattern pattern;
  double half_span = 20.0 * kTwoPi / length;
  std::optional<TargetEnvelope> target;
  if (kind == "periodic") {
    pattern = periodic_pattern(period, length, target_spec.value("duty", 0.5));
  } else if (kind == "gaussian" || kind == "custom") {
    TargetEnvelope t;
    t.center = center;
    if (kind == "gaussian") {
      t.width = target_spec.at("width_rad_per_m").get<double>();
      half_span = 10.0 * t.width;
    } else {
      t.kind = TargetEnvelope::Kind::kCustom;
      for (const auto& s : target_spec.at("samples")) {
        t.samples.emplace_back(center + s.at(0).get<double>(), s.at(1).get<double>());
      }
    }
    ApodizeOptions opt;
    opt.min_domain = doc.value("min_domain_m", opt.min_domain);
    opt.budget = doc.value("budget", opt.budget);
    const ApodizeResult r = apodize(t, length, period, ctx.run.seed, opt);
    pattern = r.pattern;
    summary["suppression_db"] = r.suppression_db;
    summary["residual"] = r.residual;
    summary["evaluations"] = r.evaluations;
    summary["converged"] = r.converged;
    summary["seed"] = ctx.run.seed;
    target = t;
  } else {
    throw ConfigError(fmt::format("unknown poling target '{}'", kind));
  }
  summary["domains"] = pattern.domains();
  write_text(ctx.file("pattern.json"), pattern_to_json(pattern) + "\n");

  const Json phi_spec = doc.value("phi", Json::object());
  half_span = phi_spec.value("half_span_rad_per_m", half_span);
  const std::size_t points = phi_spec.value("points", std::size_t{2001});
  const PatternEvaluator eval(pattern);
  const PatternEvaluator uniform(periodic_pattern(period, length, 0.5));
  const double gaussian_peak = target && target->kind == TargetEnvelope::Kind::kGaussian ? target->gaussian_peak(length) : 0.0;
  std::string csv = target && target->kind == TargetEnvelope::Kind::kGaussian
                        ? "dk_rad_per_m,abs_phi,abs_phi_uniform,target\n"
                        : "dk_rad_per_m,abs_phi,abs_phi_uniform\n";
  for (double dk : linspace(center - half_span, center + half_span, points)) {
    std::vector<double> row = {dk, std::abs(eval(dk)), std::abs(uniform(dk))};
    if (gaussian_peak > 0.0) {
      const double x = (dk - center) / target->width;
      row.push_back(gaussian_peak * std::exp(-0.5 * x * x));
    }
    csv += csv_line(row);
  }
  write_text(ctx.file("phi.csv"), csv);
  write_json(ctx.file("summary.json"), summary);
}

}  // namespace tmo::cli
