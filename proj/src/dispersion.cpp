#include "tmo/dispersion.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "tmo/constants.hpp"
#include "tmo/errors.hpp"

namespace tmo {

namespace {

double pole(double b, double c, double l2) { return b / (l2 - c); }
double pole_d(double b, double c, double l, double l2) { return -2.0 * b * l / ((l2 - c) * (l2 - c)); }
double sell(double a, double b, double l2) { return a * l2 / (l2 - b); }
double sell_d(double a, double b, double l, double l2) { return -2.0 * a * b * l / ((l2 - b) * (l2 - b)); }

std::size_t expected_coefficients(SellmeierForm f) {
  switch (f) {
    case SellmeierForm::kVacuum: return 0;
    case SellmeierForm::kStandard: return 0;  // any even count
    case SellmeierForm::kPolePole: return 5;
    case SellmeierForm::kPoleSellmeier: return 5;
    case SellmeierForm::kPoleLinear: return 4;
  }
  return 0;
}

}  // namespace

std::optional<SellmeierForm> parse_sellmeier_form(const std::string& id) {
  if (id == "vacuum") return SellmeierForm::kVacuum;
  if (id == "standard") return SellmeierForm::kStandard;
  if (id == "pole_pole") return SellmeierForm::kPolePole;
  if (id == "pole_sellmeier") return SellmeierForm::kPoleSellmeier;
  if (id == "pole_linear") return SellmeierForm::kPoleLinear;
  return std::nullopt;
}

std::string to_string(SellmeierForm form) {
  switch (form) {
    case SellmeierForm::kVacuum: return "vacuum";
    case SellmeierForm::kStandard: return "standard";
    case SellmeierForm::kPolePole: return "pole_pole";
    case SellmeierForm::kPoleSellmeier: return "pole_sellmeier";
    case SellmeierForm::kPoleLinear: return "pole_linear";
  }
  return "unknown";
}

std::pair<double, double> SellmeierAxis::index_squared(double l) const {
  const auto& c = coefficients;
  const double l2 = l * l;
  switch (form) {
    case SellmeierForm::kVacuum:
      return {1.0, 0.0};
    case SellmeierForm::kStandard: {
      double n2 = 1.0;
      double d = 0.0;
      for (std::size_t j = 0; j + 1 < c.size(); j += 2) {
        n2 += sell(c[j], c[j + 1], l2);
        d += sell_d(c[j], c[j + 1], l, l2);
      }
      return {n2, d};
    }
    case SellmeierForm::kPolePole:
      return {c[0] + pole(c[1], c[2], l2) + pole(c[3], c[4], l2),
              pole_d(c[1], c[2], l, l2) + pole_d(c[3], c[4], l, l2)};
    case SellmeierForm::kPoleSellmeier:
      return {c[0] + pole(c[1], c[2], l2) + sell(c[3], c[4], l2),
              pole_d(c[1], c[2], l, l2) + sell_d(c[3], c[4], l, l2)};
    case SellmeierForm::kPoleLinear:
      return {c[0] + pole(c[1], c[2], l2) - c[3] * l2, pole_d(c[1], c[2], l, l2) - 2.0 * c[3] * l};
  }
  return {1.0, 0.0};
}

Material::Material(std::string name, std::map<std::string, SellmeierAxis> axes, double lo_um,
                   double hi_um, std::string source)
    : name_(std::move(name)),
      axes_(std::move(axes)),
      lo_um_(lo_um),
      hi_um_(hi_um),
      source_(std::move(source)) {
  if (!(lo_um_ < hi_um_)) {
    throw StructureError(fmt::format("material {}: empty valid range [{}, {}] um", name_, lo_um_, hi_um_));
  }
  for (const auto& [label, ax] : axes_) {
    const auto need = expected_coefficients(ax.form);
    const bool ok = ax.form == SellmeierForm::kStandard
                        ? (!ax.coefficients.empty() && ax.coefficients.size() % 2 == 0)
                        : ax.coefficients.size() == need;
    if (!ok) {
      throw StructureError(fmt::format("material {} axis {}: form {} got {} coefficients", name_,
                                       label, to_string(ax.form), ax.coefficients.size()));
    }
  }
}

Material Material::vacuum() {
  Material m("vacuum", {{"any", SellmeierAxis{}}}, 0.0, std::numeric_limits<double>::infinity(),
             "identity material");
  m.vacuum_ = true;
  return m;
}

const SellmeierAxis& Material::axis(const std::string& label) const {
  if (vacuum_) return axes_.begin()->second;
  auto it = axes_.find(label);
  if (it == axes_.end()) {
    throw StructureError(fmt::format("material {} has no axis '{}'", name_, label));
  }
  return it->second;
}

namespace {

double checked_lambda(const Material& m, double omega, bool interior) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw RangeError(fmt::format("material {}: non-positive angular frequency {}", m.name(), omega));
  }
  const double l = um_from_omega(omega);
  if (m.is_vacuum()) return l;
  const bool inside = interior ? (l > m.lo_um() && l < m.hi_um()) : (l >= m.lo_um() && l <= m.hi_um());
  if (!inside) {
    throw RangeError(fmt::format("material {}: wavelength {:.6g} um outside valid range [{}, {}] um{}",
                                 m.name(), l, m.lo_um(), m.hi_um(),
                                 interior ? " (derivative needs an interior point)" : ""));
  }
  return l;
}

}  // namespace

double refractive_index(const Material& m, const std::string& axis, double omega) {
  const double l = checked_lambda(m, omega, false);
  if (m.is_vacuum()) return 1.0;
  const auto [n2, d] = m.axis(axis).index_squared(l);
  (void)d;
  if (!(n2 > 1.0)) {
    throw RangeError(fmt::format("material {} axis {}: n^2 = {} at {} um", m.name(), axis, n2, l));
  }
  return std::sqrt(n2);
}

double wavenumber(const Material& m, const std::string& axis, double omega) {
  return refractive_index(m, axis, omega) * omega / kSpeedOfLight;
}

double group_index(const Material& m, const std::string& axis, double omega) {
  const double l = checked_lambda(m, omega, true);
  if (m.is_vacuum()) return 1.0;
  const auto [n2, dn2] = m.axis(axis).index_squared(l);
  if (!(n2 > 1.0)) {
    throw RangeError(fmt::format("material {} axis {}: n^2 = {} at {} um", m.name(), axis, n2, l));
  }
  const double n = std::sqrt(n2);
  return n - l * dn2 / (2.0 * n);
}

double group_velocity(const Material& m, const std::string& axis, double omega) {
  return kSpeedOfLight / group_index(m, axis, omega);
}

double ProcessGeometry::pump_frequency(double omega_a, double omega_b) const {
  return kind == ProcessKind::kPdc ? omega_a + omega_b : omega_b - omega_a;
}

double ProcessGeometry::qpm_wavevector() const {
  return poling_period ? qpm_sign * kTwoPi / *poling_period : 0.0;
}

void ProcessGeometry::check_energy(double tol) const {
  const double expected = pump_frequency(a.center, b.center);
  if (std::abs(expected - pump.center) > tol) {
    throw PreconditionError(fmt::format(
        "energy conservation violated at centers: pump {} rad/s vs implied {} rad/s (tol {})",
        pump.center, expected, tol));
  }
}

double material_mismatch(const ProcessGeometry& g, double omega_a, double omega_b) {
  const auto& m = g.material;
  const double wp = g.pump_frequency(omega_a, omega_b);
  const double kp = wavenumber(m, g.pump.axis, wp);
  const double ka = wavenumber(m, g.a.axis, omega_a);
  const double kb = wavenumber(m, g.b.axis, omega_b);
  return g.kind == ProcessKind::kPdc ? kp - ka - kb : ka + kp - kb;
}

double phase_mismatch(const ProcessGeometry& g, double omega_a, double omega_b) {
  return material_mismatch(g, omega_a, omega_b) + g.qpm_wavevector();
}

std::optional<PolingSolution> poling_for_mismatch(double dk) {
  if (dk == 0.0) return std::nullopt;
  return PolingSolution{kTwoPi / std::abs(dk), dk > 0.0 ? -1 : +1};
}

std::optional<PolingSolution> solve_poling_period(const ProcessGeometry& g) {
  return poling_for_mismatch(material_mismatch(g, g.a.center, g.b.center));
}

ProcessGeometry with_poling(ProcessGeometry g, const PolingSolution& s) {
  g.poling_period = s.period;
  g.qpm_sign = s.qpm_sign;
  return g;
}

GvmContrast gvm_from_walkoff(double walkoff_a, double walkoff_b) {
  GvmContrast out;
  if (std::abs(walkoff_b) < 1e-18) {
    out.degenerate = true;
    out.xi = std::copysign(std::numeric_limits<double>::infinity(), walkoff_a);
    out.theta_pm_deg = out.xi > 0 ? -90.0 : 90.0;
    return out;
  }
  out.xi = walkoff_a / walkoff_b;
  out.theta_pm_deg = -std::atan(out.xi) * 180.0 / kPi;
  return out;
}

GvmContrast gvm_contrast(const ProcessGeometry& g) {
  const auto& m = g.material;
  const double up = 1.0 / group_velocity(m, g.pump.axis, g.pump.center);
  const double ua = 1.0 / group_velocity(m, g.a.axis, g.a.center);
  const double ub = 1.0 / group_velocity(m, g.b.axis, g.b.center);
  return gvm_from_walkoff(ua - up, ub - up);
}

std::vector<GvmSample> gvm_scan(const ProcessGeometry& g, const std::vector<double>& detunings) {
  std::vector<GvmSample> out;
  out.reserve(detunings.size());
  for (double d : detunings) {
    ProcessGeometry h = g;
    h.a.center = g.a.center + d;
    h.b.center = g.kind == ProcessKind::kPdc ? g.pump.center - h.a.center : h.a.center + g.pump.center;
    GvmSample s;
    s.detuning = d;
    try {
      s.value = gvm_contrast(h);
    } catch (const RangeError& e) {
      s.error = e.what();
    }
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

double inverse_gv(const Material& m, const std::string& axis, double w) {
  return group_index(m, axis, w) / kSpeedOfLight;
}

double gvd(const Material& m, const std::string& axis, double w) {
  const double h = 1e-4 * w;
  return (inverse_gv(m, axis, w + h) - inverse_gv(m, axis, w - h)) / (2.0 * h);
}

}  // namespace

TaylorProcess linearize(const ProcessGeometry& g) {
  const auto& m = g.material;
  TaylorProcess t;
  t.kind = g.kind;
  t.length = g.length;
  const double up = inverse_gv(m, g.pump.axis, g.pump.center);
  t.walkoff_a = inverse_gv(m, g.a.axis, g.a.center) - up;
  t.walkoff_b = inverse_gv(m, g.b.axis, g.b.center) - up;
  t.gvd_pump = gvd(m, g.pump.axis, g.pump.center);
  t.gvd_a = gvd(m, g.a.axis, g.a.center);
  t.gvd_b = gvd(m, g.b.axis, g.b.center);
  t.center_pump = g.pump.center;
  t.center_a = g.a.center;
  t.center_b = g.b.center;
  t.poling_period = g.poling_period;
  t.qpm_sign = g.qpm_sign;
  return t;
}

Process::Process(ProcessGeometry g) : model_(std::move(g)) {
  const auto& geo = std::get<ProcessGeometry>(model_);
  pump_inverse_gv_ = inverse_gv(geo.material, geo.pump.axis, geo.pump.center);
}

Process::Process(TaylorProcess t) : model_(std::move(t)) {}

ProcessKind Process::kind() const {
  return std::visit([](const auto& m) { return m.kind; }, model_);
}

double Process::length() const {
  return std::visit([](const auto& m) { return m.length; }, model_);
}

double Process::center_a() const {
  if (auto* g = geometry()) return g->a.center;
  return taylor()->center_a;
}

double Process::center_b() const {
  if (auto* g = geometry()) return g->b.center;
  return taylor()->center_b;
}

double Process::center_pump() const {
  if (auto* g = geometry()) return g->pump.center;
  return taylor()->center_pump;
}

double Process::comoving_wavenumber(Field f, double d) const {
  if (auto* t = taylor()) {
    switch (f) {
      case Field::kPump: return 0.5 * t->gvd_pump * d * d;
      case Field::kA: return t->walkoff_a * d + 0.5 * t->gvd_a * d * d;
      case Field::kB: return t->walkoff_b * d + 0.5 * t->gvd_b * d * d;
    }
  }
  const auto& g = *geometry();
  const FieldSpec& spec = f == Field::kPump ? g.pump : (f == Field::kA ? g.a : g.b);
  const double k0 = wavenumber(g.material, spec.axis, spec.center);
  return wavenumber(g.material, spec.axis, spec.center + d) - k0 - d * pump_inverse_gv_;
}

double Process::mismatch(double da, double db) const {
  if (auto* g = geometry()) return phase_mismatch(*g, g->a.center + da, g->b.center + db);
  const double ka = comoving_wavenumber(Field::kA, da);
  const double kb = comoving_wavenumber(Field::kB, db);
  if (kind() == ProcessKind::kPdc) return comoving_wavenumber(Field::kPump, da + db) - ka - kb;
  return ka + comoving_wavenumber(Field::kPump, db - da) - kb;
}

double Process::material_mismatch(double da, double db) const {
  if (auto* g = geometry()) return tmo::material_mismatch(*g, g->a.center + da, g->b.center + db);
  const auto& t = *taylor();
  if (!t.poling_period) {
    throw PreconditionError("Taylor process has no poling period; material mismatch is undefined");
  }
  return mismatch(da, db) - t.qpm_sign * kTwoPi / *t.poling_period;
}

GvmContrast Process::gvm() const {
  if (auto* g = geometry()) return gvm_contrast(*g);
  return gvm_from_walkoff(taylor()->walkoff_a, taylor()->walkoff_b);
}

double Process::walkoff(Field f) const {
  if (f == Field::kPump) return 0.0;
  if (auto* t = taylor()) return f == Field::kA ? t->walkoff_a : t->walkoff_b;
  const auto& g = *geometry();
  const FieldSpec& spec = f == Field::kA ? g.a : g.b;
  return inverse_gv(g.material, spec.axis, spec.center) - pump_inverse_gv_;
}

}  // namespace tmo
