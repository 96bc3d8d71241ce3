#include <algorithm>

#include <fmt/format.h>

#include "commands.hpp"
#include "tmo/errors.hpp"
#include "tmo/io.hpp"
#include "tmo/qpg.hpp"

namespace tmo::cli {

namespace {

HeisenbergOptions solver_options(const Json& doc) {
  HeisenbergOptions opt;
  if (!doc.contains("solver")) return opt;
  const Json& s = doc.at("solver");
  opt.z_steps = s.value("z_steps", opt.z_steps);
  opt.unitarity_tolerance = s.value("unitarity_tolerance", opt.unitarity_tolerance);
  opt.max_step_angle = s.value("max_step_angle", opt.max_step_angle);
  return opt;
}

}  // namespace

void cmd_qpg(const Context& ctx) {
  const Json& doc = ctx.run.doc;
  const Pipeline p = load_pipeline(ctx);
  const HeisenbergOptions options = solver_options(doc);

  const JointAmplitude transfer = build_transfer(p.process, p.pm, p.pump, p.grid);
  const SchmidtData modes = operation_schmidt(transfer);
  write_matrix(ctx, "transfer", transfer.values, p.grid, "transfer", "sum |F|^2 * cell = 1");
  write_text(ctx.file("schmidt.csv"), weights_csv(modes.weights));

  Json summary = {{"command", "qpg"}, {"K", schmidt_number(modes)}, {"grid_points", p.grid.a.points}};
  std::vector<double> weights(modes.weights.data(), modes.weights.data() + std::min<Eigen::Index>(16, modes.weights.size()));
  summary["weights"] = weights;

  if (doc.contains("sweep")) {
    HeisenbergOptions sweep_opt = options;
    sweep_opt.inputs_only = true;
    const auto thetas = read_values(doc.at("sweep"), "theta");
    const auto samples = saturation_sweep(p.process, p.pm, p.pump, thetas, p.grid, sweep_opt);
    std::string csv = "theta,pump_energy_rel,eta0,selectivity,separability0\n";
    const SweepSample* best = nullptr;
    for (const auto& s : samples) {
      csv += csv_line({s.theta, s.pump_energy_rel, s.eta0, s.selectivity, s.separability0});
      if (!best || s.selectivity > best->selectivity) best = &s;
    }
    write_text(ctx.file("sweep.csv"), csv);
    if (best) {
      summary["sweep"] = {{"max_selectivity", best->selectivity}, {"theta", best->theta}, {"eta0", best->eta0}};
    }
  }

  if (doc.contains("greens")) {
    const double theta = doc.at("greens").at("theta").get<double>();
    const GreensFunctions g = solve_heisenberg(p.process, p.pm, p.pump, theta, p.grid, options);
    write_matrix(ctx, "greens_aa", g.aa, p.grid, "greens_aa", "unitary block");
    write_matrix(ctx, "greens_ac", g.ac, p.grid, "greens_ac", "unitary block");
    write_matrix(ctx, "greens_ca", g.ca, p.grid, "greens_ca", "unitary block");
    write_matrix(ctx, "greens_cc", g.cc, p.grid, "greens_cc", "unitary block");
    const auto eta = g.efficiencies();
    summary["greens"] = {{"theta", theta},
                         {"unitarity_error", g.unitarity_error()},
                         {"eta", std::vector<double>(eta.begin(), eta.begin() + std::min<std::size_t>(16, eta.size()))},
                         {"selectivity", selectivity(eta)}};
  }

  if (doc.value("tmi", false)) {
    const double theta = theta_for_efficiency(p.process, p.pm, p.pump, p.grid, 0.5, options);
    const GreensFunctions stage = solve_heisenberg(p.process, p.pm, p.pump, theta, p.grid, options);
    const auto stage_eta = stage.efficiencies();
    const TmiScan scan = optimize_tmi(stage);
    std::string csv = "phase_rad,eta0,selectivity\n";
    for (std::size_t k = 0; k < scan.phases.size(); ++k) {
      csv += csv_line({scan.phases[k], scan.eta0[k], scan.selectivity[k]});
    }
    write_text(ctx.file("tmi.csv"), csv);
    summary["tmi"] = {{"stage_theta", theta},
                      {"stage_eta0", stage_eta.front()},
                      {"stage_selectivity", selectivity(stage_eta)},
                      {"best_phase_rad", scan.best_phase},
                      {"selectivity", scan.best_selectivity},
                      {"eta0", scan.best_eta0},
                      {"destructive_phase_rad", scan.destructive_phase},
                      {"destructive_eta0", scan.destructive_eta0}};
  }
  write_json(ctx.file("summary.json"), summary);
}

}  // namespace tmo::cli
