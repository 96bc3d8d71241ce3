#include <algorithm>

#include <fmt/format.h>

#include "commands.hpp"
#include "tmo/errors.hpp"
#include "tmo/io.hpp"
#include "tmo/modes.hpp"

namespace tmo::cli {

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

void cmd_jsa(const Context& ctx) {
  const Json& doc = ctx.run.doc;
  const Pipeline p = load_pipeline(ctx);
  const FilterSpec filters = doc.contains("filters") ? parse_filters(doc.at("filters")) : FilterSpec{};

  const JointAmplitude jsa = build_jsa(p.process, p.pm, p.pump, p.grid);
  const SchmidtData data = doc.value("engineer", false) ? engineer_state(p.pump, p.process, p.pm, p.grid)
                                                          : schmidt(jsa);
  const PurityReport report = purity_report(jsa, filters);

  write_matrix(ctx, "jsa", jsa.values, p.grid, "jsa", "sum |f|^2 * cell = 1");
  write_text(ctx.file("schmidt.csv"), weights_csv(data.weights));

  Json summary = {{"command", "jsa"},
                  {"K", report.schmidt_number},
                  {"P", report.purity},
                  {"g2", report.g2},
                  {"weights", report.weights},
                  {"heralded_purity_a", optional_number(report.heralded_purity_a)},
                  {"transmission_b", optional_number(report.transmission_b)},
                  {"heralded_purity_b", optional_number(report.heralded_purity_b)},
                  {"transmission_a", optional_number(report.transmission_a)},
                  {"grid_points", p.grid.a.points}};
  const GvmContrast xi = p.process.gvm();
  summary["xi"] = xi.degenerate ? Json(nullptr) : Json(xi.xi);

  if (doc.contains("reference_modes")) {
    const auto count = std::min<std::size_t>(doc.at("reference_modes").get<std::size_t>(), data.size());
    summary["hermite_gauss_overlap_a"] = hermite_gauss_overlaps(data.modes_a, p.grid.a, count);
    summary["hermite_gauss_overlap_b"] = hermite_gauss_overlaps(data.modes_b, p.grid.b, count);
  }

  if (doc.contains("sweep")) {
    const auto bandwidths = read_detuning_values(doc.at("sweep"), "bandwidth");
    const auto samples = purity_vs_bandwidth(p.process, p.pm, p.pump, p.grid, bandwidths);
    std::string csv = "bandwidth_rad_s,purity\n";
    const BandwidthSample* best = nullptr;
    for (const auto& s : samples) {
      csv += csv_line({s.bandwidth, s.purity});
      if (!best || s.purity > best->purity) best = &s;
    }
    write_text(ctx.file("sweep.csv"), csv);
    if (best) summary["sweep"] = {{"max_purity", best->purity}, {"bandwidth_rad_s", best->bandwidth}};
  }
  write_json(ctx.file("summary.json"), summary);
}

}  // namespace tmo::cli
