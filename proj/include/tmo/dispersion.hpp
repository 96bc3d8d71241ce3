#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tmo {

/// Functional forms of the refractive-index models shipped in materials/.
/// All coefficients use wavelengths in micrometres.
enum class SellmeierForm {
  kVacuum,         // n = 1
  kStandard,       // n^2 = 1 + sum_j A_j l^2 / (l^2 - B_j)            [A1,B1,A2,B2,...]
  kPolePole,       // n^2 = A + B/(l^2 - C) + D/(l^2 - E)              [A,B,C,D,E]
  kPoleSellmeier,  // n^2 = A + B/(l^2 - C) + D l^2/(l^2 - E)          [A,B,C,D,E]
  kPoleLinear,     // n^2 = A + B/(l^2 - C) - D l^2                    [A,B,C,D]
};

std::optional<SellmeierForm> parse_sellmeier_form(const std::string& id);
std::string to_string(SellmeierForm form);

struct SellmeierAxis {
  SellmeierForm form = SellmeierForm::kVacuum;
  std::vector<double> coefficients;

  /// n^2 and d(n^2)/d(lambda) at lambda (um).
  std::pair<double, double> index_squared(double lambda_um) const;
};

class Material {
 public:
  Material(std::string name, std::map<std::string, SellmeierAxis> axes, double lo_um,
           double hi_um, std::string source = {});

  static Material vacuum();

  const std::string& name() const { return name_; }
  const std::string& source() const { return source_; }
  double lo_um() const { return lo_um_; }
  double hi_um() const { return hi_um_; }
  bool is_vacuum() const { return vacuum_; }
  const std::map<std::string, SellmeierAxis>& axes() const { return axes_; }
  const SellmeierAxis& axis(const std::string& label) const;

 private:
  std::string name_;
  std::map<std::string, SellmeierAxis> axes_;
  double lo_um_;
  double hi_um_;
  std::string source_;
  bool vacuum_ = false;
};

/// Loads `<dir>/<name>.json`. Throws ConfigError on unknown form identifiers.
Material load_material(const std::filesystem::path& dir, const std::string& name);
Material parse_material(const std::string& json_text);
std::filesystem::path default_materials_dir();

double refractive_index(const Material& m, const std::string& axis, double omega);
double wavenumber(const Material& m, const std::string& axis, double omega);
/// n_g = n - lambda dn/dlambda, from the closed-form derivative.
double group_index(const Material& m, const std::string& axis, double omega);
double group_velocity(const Material& m, const std::string& axis, double omega);

enum class ProcessKind { kPdc, kSfg };

enum class FieldRole { kPump, kSignal, kIdler, kInput, kOutput };

struct FieldSpec {
  FieldRole role = FieldRole::kPump;
  double center = 0.0;  // rad/s
  std::string axis;
};

/// Three-wave process in a bulk medium.
///
/// Field `a` is the signal (PDC) or input (SFG); field `b` is the idler (PDC) or
/// output (SFG). The mismatch convention is "driving minus generated":
///   PDC: dk = k_p(w_a + w_b) - k_a(w_a) - k_b(w_b) + k_qpm
///   SFG: dk = k_a(w_a) + k_p(w_b - w_a) - k_b(w_b) + k_qpm
/// with k_qpm = qpm_sign * 2 pi / period when a period is set.
struct ProcessGeometry {
  ProcessKind kind = ProcessKind::kPdc;
  Material material = Material::vacuum();
  FieldSpec pump;
  FieldSpec a;
  FieldSpec b;
  double length = 0.0;  // m
  std::optional<double> poling_period;  // m
  int qpm_sign = +1;

  double pump_frequency(double omega_a, double omega_b) const;
  double qpm_wavevector() const;
  /// Throws PreconditionError if the centers violate energy conservation by more than tol.
  void check_energy(double tol) const;
};

double phase_mismatch(const ProcessGeometry& g, double omega_a, double omega_b);
/// Mismatch without the grating term.
double material_mismatch(const ProcessGeometry& g, double omega_a, double omega_b);

struct PolingSolution {
  double period = 0.0;  // m
  int qpm_sign = +1;
};

/// Period (and sign) that cancels the material mismatch at the centers;
/// nullopt when the process is already phasematched.
std::optional<PolingSolution> solve_poling_period(const ProcessGeometry& g);
std::optional<PolingSolution> poling_for_mismatch(double material_dk);
ProcessGeometry with_poling(ProcessGeometry g, const PolingSolution& s);

struct GvmContrast {
  double xi = 0.0;
  double theta_pm_deg = 0.0;
  bool degenerate = false;  // |u_b^-1 - u_p^-1| below 1e-18 s/m
};

GvmContrast gvm_contrast(const ProcessGeometry& g);
GvmContrast gvm_from_walkoff(double walkoff_a, double walkoff_b);

struct GvmSample {
  double detuning = 0.0;  // rad/s applied to field a
  std::optional<GvmContrast> value;
  std::string error;  // set when value is empty
};

/// Detunes field a (pump held fixed; b follows energy conservation).
std::vector<GvmSample> gvm_scan(const ProcessGeometry& g, const std::vector<double>& detunings);

/// First/second-order Taylor model of a process in the pump's co-moving frame.
///
/// walkoff_x = u_x^-1 - u_p^-1 (s/m), gvd_x = d^2k/dw^2 (s^2/m). Centers are taken
/// as exactly phasematched (the grating is implied by poling_period when present).
struct TaylorProcess {
  ProcessKind kind = ProcessKind::kPdc;
  double length = 0.0;
  double walkoff_a = 0.0;
  double walkoff_b = 0.0;
  double gvd_pump = 0.0;
  double gvd_a = 0.0;
  double gvd_b = 0.0;
  double center_pump = 0.0;
  double center_a = 0.0;
  double center_b = 0.0;
  std::optional<double> poling_period;
  int qpm_sign = +1;
};

TaylorProcess linearize(const ProcessGeometry& g);

/// Either an exact Sellmeier geometry or its Taylor model; all kernels accept both.
class Process {
 public:
  Process(ProcessGeometry g);  // NOLINT(google-explicit-constructor)
  Process(TaylorProcess t);    // NOLINT(google-explicit-constructor)

  ProcessKind kind() const;
  double length() const;
  double center_a() const;
  double center_b() const;
  double center_pump() const;

  enum class Field { kPump, kA, kB };
  /// k(w0 + d) - k(w0) - d/u_p: the field's phase per metre in the pump frame.
  double comoving_wavenumber(Field f, double detuning) const;
  /// Post-grating mismatch at detunings (d_a, d_b) from the centers.
  double mismatch(double detuning_a, double detuning_b) const;
  /// Mismatch before the grating; what a poling pattern integrates against.
  double material_mismatch(double detuning_a, double detuning_b) const;
  GvmContrast gvm() const;
  /// u_x^-1 - u_p^-1 at the centers.
  double walkoff(Field f) const;

  const ProcessGeometry* geometry() const { return std::get_if<ProcessGeometry>(&model_); }
  const TaylorProcess* taylor() const { return std::get_if<TaylorProcess>(&model_); }

 private:
  std::variant<ProcessGeometry, TaylorProcess> model_;
  double center_residual_ = 0.0;
  double pump_inverse_gv_ = 0.0;
};

}  // namespace tmo
