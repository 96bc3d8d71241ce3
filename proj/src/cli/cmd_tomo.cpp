#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "commands.hpp"
#include "tmo/errors.hpp"
#include "tmo/io.hpp"
#include "tmo/modes.hpp"

namespace tmo::cli {

namespace {

ModeBasis load_basis(const Json& spec, std::size_t d, std::optional<std::size_t> points) {
  FrequencyAxis axis;
  axis.center = read_angular_opt(spec, "center").value_or(0.0);
  axis.span = read_detuning(spec, "span");
  axis.points = points ? *points : spec.at("points").get<std::size_t>();
  const std::string kind = spec.value("kind", std::string("hermite_gauss"));
  if (kind == "hermite_gauss") return hermite_gauss_basis(d, 0.0, read_detuning(spec, "sigma"), axis);
  if (kind == "frequency_bins") {
    return bin_basis(BinKind::kFrequency, d, read_detuning(spec, "spacing"), read_detuning(spec, "width"), axis);
  }
  if (kind == "time_bins") {
    return bin_basis(BinKind::kTime, d, spec.at("spacing_s").get<double>(), spec.at("width_s").get<double>(), axis);
  }
  throw ConfigError(fmt::format("unknown basis kind '{}'", kind));
}

CMatrix load_state(const Json& spec, std::size_t d, std::uint64_t seed) {
  const std::string kind = spec.value("kind", std::string("random_pure"));
  if (kind == "random_pure") return random_pure_state(d, seed);
  if (kind == "random_mixed") return random_mixed_state(d, seed);
  if (kind == "maximally_mixed") return CMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) / static_cast<double>(d);
  if (kind == "vector") {
    const Json& amps = spec.at("amplitudes");
    if (amps.size() != d) throw ConfigError(fmt::format("state vector has {} entries, d = {}", amps.size(), d));
    CVector v(static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < d; ++k) {
      const Json& a = amps[k];
      v(static_cast<Eigen::Index>(k)) = a.is_array() ? cdouble(a[0].get<double>(), a[1].get<double>()) : cdouble(a.get<double>());
    }
    if (v.norm() == 0.0) throw ConfigError("state vector is zero");
    v.normalize();
    return v * v.adjoint();
  }
  throw ConfigError(fmt::format("unknown state kind '{}'", kind));
}

Json matrix_json(const CMatrix& m) { return Json::parse(complex_matrix_json(m)); }

}  // namespace

void cmd_tomo(const Context& ctx) {
  const Json& doc = ctx.run.doc;
  const std::size_t d = doc.at("d").get<std::size_t>();
  // Rejects unsupported dimensions before any artifact is written.
  const std::vector<CVector> projectors = mub_projectors(d);

  if (doc.contains("basis")) {
    const ModeBasis basis = load_basis(doc.at("basis"), d, ctx.run.grid_points);
    const auto bases = mub_set(d, basis);
    for (std::size_t b = 0; b < bases.size(); ++b) {
      std::string csv = "detuning_rad_s,intensity";
      for (std::size_t k = 0; k < d; ++k) csv += fmt::format(",abs_{0},phase_{0}", k);
      csv += '\n';
      const CMatrix& v = bases[b].vectors;
      double peak = 0.0;
      for (Eigen::Index j = 0; j < v.rows(); ++j) peak = std::max(peak, v.row(j).squaredNorm());
      for (Eigen::Index j = 0; j < v.rows(); ++j) {
        std::vector<double> row = {basis.axis.detuning(static_cast<std::size_t>(j)), v.row(j).squaredNorm() / peak};
        for (Eigen::Index k = 0; k < v.cols(); ++k) {
          row.push_back(std::abs(v(j, k)));
          row.push_back(std::arg(v(j, k)));
        }
        csv += csv_line(row);
      }
      write_text(ctx.file(fmt::format("mub_{}.csv", b)), csv);
    }
  }

  const Json state_spec = doc.value("state", Json::object());
  std::optional<SamplingSpec> sampling;
  if (doc.contains("shots")) sampling = SamplingSpec{doc.at("shots").get<std::uint64_t>(), d, ctx.run.seed};
  const std::size_t trials = doc.value("trials", std::size_t{1});
  if (trials == 0) throw ConfigError("'trials' must be positive");

  std::vector<double> fidelities;
  for (std::size_t t = 0; t < trials; ++t) {
    const CMatrix rho = load_state(state_spec, d, ctx.run.seed + t);
    std::optional<SamplingSpec> s = sampling;
    if (s) s->seed = ctx.run.seed + t;
    const auto records = simulate_projections(rho, projectors, s);
    const CMatrix estimate = reconstruct(records, d);
    fidelities.push_back(fidelity(rho, estimate));
    if (t > 0) continue;
    std::string csv = "basis,outcome,value,shots\n";
    for (std::size_t r = 0; r < records.size(); ++r) {
      csv += fmt::format("{},{},{},{}\n", r / d, r % d, format_double(records[r].value),
                         records[r].shots ? fmt::format("{}", *records[r].shots) : std::string());
    }
    write_text(ctx.file("records.csv"), csv);
    write_json(ctx.file("rho.json"), {{"true", matrix_json(rho)}, {"reconstructed", matrix_json(estimate)}});
  }
  double mean = 0.0;
  for (double f : fidelities) mean += f;
  mean /= static_cast<double>(fidelities.size());
  Json summary = {{"command", "tomo"},
                  {"d", d},
                  {"bases", d + 1},
                  {"trials", trials},
                  {"fidelity", fidelities.front()},
                  {"min_fidelity", *std::min_element(fidelities.begin(), fidelities.end())},
                  {"mean_fidelity", mean}};
  if (sampling) summary["shots"] = sampling->total_shots;
  write_json(ctx.file("summary.json"), summary);
}

}  // namespace tmo::cli
