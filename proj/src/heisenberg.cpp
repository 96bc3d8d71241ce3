#include <algorithm>
#include <cmath>
#include <memory>

#include <Eigen/SVD>
#include <fftw3.h>
#include <fmt/format.h>

#include "tmo/constants.hpp"
#include "tmo/errors.hpp"
#include "tmo/qpg.hpp"

namespace tmo {

double CouplingProfile::weight(double z) const {
  if (z < z0 || z > z1) return 0.0;
  if (rms == 0.0) return 1.0;
  return std::exp(-0.5 * z * z / (rms * rms));
}

CouplingProfile CouplingProfile::for_model(const Process& process, const Phasematching& pm) {
  const double L = process.length();
  switch (pm.model) {
    case Phasematching::Model::kSinc:
      return {0.0, L, 0.0};
    case Phasematching::Model::kGaussian: {
      const double s = L * std::sqrt(0.5 * kGaussianPmGamma);
      return {-4.0 * s, 4.0 * s, s};
    }
    case Phasematching::Model::kPattern:
      break;
  }
  throw PreconditionError("propagation supports sinc (uniform) and Gaussian coupling profiles only");
}

namespace {

struct FftwPlan {
  fftw_plan plan = nullptr;
  ~FftwPlan() {
    if (plan) fftw_destroy_plan(plan);
  }
};

// Everything the propagation and its first-order limit share.
struct Discretisation {
  std::size_t n = 0;
  std::size_t steps = 0;
  double dz = 0.0;
  CouplingProfile profile;
  std::vector<double> omega;  // centred detunings
  std::vector<double> ka;     // co-moving wavenumbers of the input
  std::vector<double> kc;     // and of the converted field
  std::vector<double> kp;     // pump, in FFT (unshifted) order
  std::vector<cdouble> alpha;  // pump spectrum, FFT order
  double residual = 0.0;      // mismatch left at the centres
  bool static_pump = true;

  double z(std::size_t k) const { return profile.z0 + (static_cast<double>(k) + 0.5) * dz; }
};

Discretisation discretise(const Process& process, const Phasematching& pm, const PumpSpec& pump,
                          const FrequencyGrid& grid, std::size_t z_steps) {
  if (process.kind() != ProcessKind::kSfg) {
    throw PreconditionError("Green's functions need a sum-frequency process");
  }
  if (z_steps < 100) throw PreconditionError(fmt::format("z_steps must be >= 100, got {}", z_steps));
  grid.validate();
  pump.validate();
  if (grid.a.points != grid.b.points ||
      std::abs(grid.a.step() - grid.b.step()) > 1e-12 * grid.a.step()) {
    throw PreconditionError("input and output axes must share point count and spacing");
  }
  Discretisation d;
  d.n = grid.a.points;
  d.steps = z_steps;
  d.profile = CouplingProfile::for_model(process, pm);
  d.dz = (d.profile.z1 - d.profile.z0) / static_cast<double>(z_steps);
  const double window = kTwoPi / grid.a.step();
  const double walk = std::max(std::abs(process.walkoff(Process::Field::kA)),
                               std::abs(process.walkoff(Process::Field::kB))) *
                      (d.profile.z1 - d.profile.z0);
  if (walk > window) {
    throw ResolutionError(fmt::format(
        "walk-off {:.4g} s exceeds the time window {:.4g} s; refine the frequency step", walk, window));
  }
  d.omega = grid.a.detunings();
  d.ka.resize(d.n);
  d.kc.resize(d.n);
  d.kp.resize(d.n);
  d.alpha.resize(d.n);
  for (std::size_t j = 0; j < d.n; ++j) {
    d.ka[j] = process.comoving_wavenumber(Process::Field::kA, d.omega[j]);
    d.kc[j] = process.comoving_wavenumber(Process::Field::kB, d.omega[j]);
    // FFT order: index m carries detuning m * step, wrapped to the upper half.
    const std::size_t m = (j + d.n - d.n / 2) % d.n;
    d.alpha[m] = pump.envelope(d.omega[j]);
    d.kp[m] = process.comoving_wavenumber(Process::Field::kPump, d.omega[j]);
    if (d.kp[m] != 0.0) d.static_pump = false;
  }
  d.residual = process.mismatch(0.0, 0.0);
  if (d.residual != 0.0) d.static_pump = false;
  return d;
}

// Pump spectrum (FFT order) at position z, carrying the residual mismatch.
std::vector<cdouble> pump_spectrum(const Discretisation& d, double z) {
  std::vector<cdouble> s(d.n);
  for (std::size_t m = 0; m < d.n; ++m) s[m] = d.alpha[m] * std::polar(1.0, (d.kp[m] + d.residual) * z);
  return s;
}

// Time-domain pump p(t_n) = sum_m s_m exp(-2 pi i m n / N).
std::vector<cdouble> pump_time(const std::vector<cdouble>& spectrum) {
  const int n = static_cast<int>(spectrum.size());
  std::vector<cdouble> in = spectrum;
  std::vector<cdouble> out(spectrum.size());
  fftw_plan p = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                 reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(p);
  fftw_destroy_plan(p);
  return out;
}

double pump_scale(const Discretisation& d) {
  const auto p = pump_time(pump_spectrum(d, 0.0));
  double peak = 0.0;
  for (const auto& v : p) peak = std::max(peak, std::abs(v));
  if (!(peak > 0.0)) throw PreconditionError("pump vanishes on the grid");
  return 1.0 / peak;
}

CMatrix first_order(const Discretisation& d, double kappa) {
  const auto n = static_cast<Eigen::Index>(d.n);
  const double scale = pump_scale(d);
  CMatrix g = CMatrix::Zero(n, n);
  std::vector<cdouble> ea(d.n);
  std::vector<cdouble> ec(d.n);
  for (std::size_t k = 0; k < d.steps; ++k) {
    const double z = d.z(k);
    const double w = d.profile.weight(z);
    if (w == 0.0) continue;
    const auto s = pump_spectrum(d, z);
    for (std::size_t j = 0; j < d.n; ++j) {
      ea[j] = std::polar(1.0, d.ka[j] * z);
      ec[j] = std::polar(1.0, -d.kc[j] * z);
    }
    const cdouble pref = kI * kappa * w * d.dz * scale;
    for (Eigen::Index i = 0; i < n; ++i) {
      const cdouble ci = pref * ea[static_cast<std::size_t>(i)];
      cdouble* col = g.col(i).data();
      // o - i wraps at o = i.
      const cdouble* lower = s.data() + (d.n - static_cast<std::size_t>(i));
      const cdouble* upper = s.data() - static_cast<std::ptrdiff_t>(i);
      for (Eigen::Index o = 0; o < i; ++o) col[o] += ci * lower[o] * ec[static_cast<std::size_t>(o)];
      for (Eigen::Index o = i; o < n; ++o) col[o] += ci * upper[o] * ec[static_cast<std::size_t>(o)];
    }
  }
  return g;
}

}  // namespace

CMatrix first_order_transfer(const Process& process, const Phasematching& pm, const PumpSpec& pump,
                             const FrequencyGrid& grid, std::size_t z_steps, double kappa) {
  return first_order(discretise(process, pm, pump, grid, z_steps), kappa);
}

namespace {

// Discretisation and theta normalisation shared by every solve of one configuration.
struct Prepared {
  Discretisation d;
  FrequencyGrid grid;
  double unit_norm = 0.0;
  double scale = 0.0;
  double lambda0 = 1.0;  // leading first-order Schmidt weight
};

Prepared prepare(const Process& process, const Phasematching& pm, const PumpSpec& pump,
                 const FrequencyGrid& grid, const HeisenbergOptions& options) {
  Prepared p;
  p.d = discretise(process, pm, pump, grid, options.z_steps);
  p.grid = grid;
  const CMatrix unit = first_order(p.d, 1.0);
  p.unit_norm = unit.norm();
  p.scale = pump_scale(p.d);
  if (p.unit_norm > 0.0) {
    Eigen::BDCSVD<CMatrix> svd(unit);
    p.lambda0 = std::pow(svd.singularValues()(0) / p.unit_norm, 2);
  }
  return p;
}

GreensFunctions propagate(const Prepared& prep, double theta, const HeisenbergOptions& options) {
  if (theta < 0.0) throw PreconditionError(fmt::format("coupling theta must be >= 0, got {}", theta));
  const Discretisation& d = prep.d;
  const FrequencyGrid& grid = prep.grid;
  const std::size_t n = d.n;
  const auto ni = static_cast<Eigen::Index>(n);
  const double kappa = theta / prep.unit_norm;
  const double scale = prep.scale;
  const std::size_t cols = options.inputs_only ? n : 2 * n;

  // Column c holds [a; c] for one impulse; 2 * cols contiguous length-n transforms.
  CMatrix x = CMatrix::Zero(2 * ni, static_cast<Eigen::Index>(cols));
  for (std::size_t c = 0; c < cols; ++c) x(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c)) = 1.0;

  const int len = static_cast<int>(n);
  const int howmany = static_cast<int>(2 * cols);
  auto* data = reinterpret_cast<fftw_complex*>(x.data());
  FftwPlan fwd;
  FftwPlan bwd;
  fwd.plan = fftw_plan_many_dft(1, &len, howmany, data, nullptr, 1, len, data, nullptr, 1, len, FFTW_FORWARD,
                                FFTW_ESTIMATE);
  bwd.plan = fftw_plan_many_dft(1, &len, howmany, data, nullptr, 1, len, data, nullptr, 1, len, FFTW_BACKWARD,
                                FFTW_ESTIMATE);

  // Half-step linear phases; the inverse-FFT 1/N is folded into the full-step factors.
  std::vector<cdouble> half_a(n), half_c(n), full_a(n), full_c(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    half_a[j] = std::polar(1.0, 0.5 * d.ka[j] * d.dz);
    half_c[j] = std::polar(1.0, 0.5 * d.kc[j] * d.dz);
    full_a[j] = half_a[j] * half_a[j] * inv_n;
    full_c[j] = half_c[j] * half_c[j] * inv_n;
  }
  auto apply_phase = [&](const std::vector<cdouble>& pa, const std::vector<cdouble>& pc) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      cdouble* col = x.col(c).data();
      for (std::size_t j = 0; j < n; ++j) {
        col[j] *= pa[j];
        col[n + j] *= pc[j];
      }
    }
  };

  std::vector<cdouble> p_time = pump_time(pump_spectrum(d, 0.0));
  std::vector<double> cosv(n);
  std::vector<cdouble> to_a(n), to_c(n);
  apply_phase(half_a, half_c);
  for (std::size_t k = 0; k < d.steps; ++k) {
    const double z = d.z(k);
    if (!d.static_pump) p_time = pump_time(pump_spectrum(d, z));
    const double w = d.profile.weight(z);
    double max_angle = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double amp = std::abs(p_time[t]) * scale;
      const double angle = kappa * w * amp * d.dz;
      max_angle = std::max(max_angle, angle);
      cosv[t] = std::cos(angle);
      const cdouble rot = amp > 0.0 ? p_time[t] / std::abs(p_time[t]) : cdouble(1.0);
      to_a[t] = kI * std::conj(rot) * std::sin(angle);
      to_c[t] = kI * rot * std::sin(angle);
    }
    if (max_angle > options.max_step_angle) {
      throw ConvergenceError(fmt::format(
          "coupling rotates {:.3g} rad per step; increase z_steps beyond {}", max_angle, d.steps));
    }
    fftw_execute(fwd.plan);
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      cdouble* col = x.col(c).data();
      for (std::size_t t = 0; t < n; ++t) {
        const cdouble a = col[t];
        const cdouble b = col[n + t];
        col[t] = cosv[t] * a + to_a[t] * b;
        col[n + t] = cosv[t] * b + to_c[t] * a;
      }
    }
    fftw_execute(bwd.plan);
    if (k + 1 < d.steps) {
      apply_phase(full_a, full_c);
    } else {
      std::vector<cdouble> last_a(n), last_c(n);
      for (std::size_t j = 0; j < n; ++j) {
        last_a[j] = half_a[j] * inv_n;
        last_c[j] = half_c[j] * inv_n;
      }
      apply_phase(last_a, last_c);
    }
  }

  // Interaction picture: strip free propagation between z0 and z1.
  const double z0 = d.profile.z0;
  const double z1 = d.profile.z1;
  for (std::size_t j = 0; j < n; ++j) {
    const auto r = static_cast<Eigen::Index>(j);
    x.row(r) *= std::polar(1.0, -d.ka[j] * z1);
    x.row(ni + r) *= std::polar(1.0, -d.kc[j] * z1);
    x.col(r) *= std::polar(1.0, d.ka[j] * z0);
    if (!options.inputs_only) x.col(ni + r) *= std::polar(1.0, d.kc[j] * z0);
  }

  GreensFunctions g;
  g.grid = grid;
  g.theta = theta;
  g.kappa = kappa * scale;
  g.aa = x.topLeftCorner(ni, ni);
  g.ca = x.bottomLeftCorner(ni, ni);
  if (!options.inputs_only) {
    g.ac = x.topRightCorner(ni, ni);
    g.cc = x.bottomRightCorner(ni, ni);
  }
  const double err = g.unitarity_error();
  if (err > options.unitarity_tolerance) {
    throw ConvergenceError(fmt::format(
        "Green's functions violate unitarity by {:.3g}; increase z_steps beyond {}", err, d.steps));
  }
  return g;
}

}  // namespace

GreensFunctions solve_heisenberg(const Process& process, const Phasematching& pm, const PumpSpec& pump,
                                 double theta, const FrequencyGrid& grid, const HeisenbergOptions& options) {
  return propagate(prepare(process, pm, pump, grid, options), theta, options);
}

std::vector<SweepSample> saturation_sweep(const Process& process, const Phasematching& pm,
                                          const PumpSpec& pump, const std::vector<double>& thetas,
                                          const FrequencyGrid& grid, const HeisenbergOptions& options) {
  HeisenbergOptions opt = options;
  opt.inputs_only = true;
  const Prepared prep = prepare(process, pm, pump, grid, opt);
  std::vector<SweepSample> out;
  for (double theta : thetas) {
    SweepSample s;
    s.theta = theta;
    s.pump_energy_rel = theta * theta / (0.25 * kPi * kPi);
    if (theta == 0.0) {
      s.eta.assign(grid.a.points, 0.0);
    } else {
      s.eta = propagate(prep, theta, opt).efficiencies();
    }
    s.eta0 = s.eta.front();
    s.selectivity = selectivity(s.eta);
    s.separability0 = separability(s.eta, 0, s.eta.size() - 1);
    out.push_back(std::move(s));
  }
  return out;
}

double theta_for_efficiency(const Process& process, const Phasematching& pm, const PumpSpec& pump,
                            const FrequencyGrid& grid, double target, const HeisenbergOptions& options) {
  if (!(target > 0.0 && target < 1.0)) {
    throw PreconditionError(fmt::format("target efficiency must lie in (0, 1), got {}", target));
  }
  HeisenbergOptions opt = options;
  opt.inputs_only = true;
  const Prepared prep = prepare(process, pm, pump, grid, opt);
  auto eta0 = [&](double theta) {
    return propagate(prep, theta, opt).efficiencies().front() - target;
  };
  // Secant from the low-gain guess sin^2(sqrt(lambda_0) theta); eta_0 is monotone below saturation.
  double t0 = std::asin(std::sqrt(target)) / std::sqrt(prep.lambda0);
  double f0 = eta0(t0);
  double t1 = t0 * (1.0 + (f0 > 0.0 ? -0.1 : 0.1));
  double f1 = eta0(t1);
  for (int it = 0; it < 20 && std::abs(f1) > 1e-6; ++it) {
    if (f1 == f0) break;
    const double t2 = t1 - f1 * (t1 - t0) / (f1 - f0);
    t0 = t1;
    f0 = f1;
    t1 = std::clamp(t2, 0.5 * t0, 2.0 * t0);
    f1 = eta0(t1);
  }
  if (std::abs(f1) > 1e-4) {
    throw ConvergenceError(fmt::format("no coupling reaches efficiency {} (residual {:.3g})", target, f1));
  }
  return t1;
}

}  // namespace tmo
