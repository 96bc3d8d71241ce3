#pragma once

#include <optional>
#include <vector>

#include "tmo/dispersion.hpp"
#include "tmo/grid.hpp"
#include "tmo/poling.hpp"
#include "tmo/pump.hpp"
#include "tmo/schmidt.hpp"

namespace tmo {

/// exp(-gamma x^2) has the same FWHM as |sinc(x)|, x = dk L / 2.
inline constexpr double kGaussianPmGamma = 0.193;

struct Phasematching {
  enum class Model { kSinc, kGaussian, kPattern };
  Model model = Model::kSinc;
  std::optional<PolingPattern> pattern;  // kPattern only; evaluated at the material mismatch
};

/// phi at detunings (d_a, d_b) from the process centres.
cdouble phasematching_value(const Process& process, const Phasematching& pm, double da, double db);

/// Pump detuning that feeds (d_a, d_b): d_a + d_b for PDC, d_b - d_a for SFG.
double pump_detuning(const Process& process, double da, double db);

/// Throws ResolutionError when the pump or phasematching FWHM spans fewer than 4 grid steps.
void check_resolution(const Process& process, const Phasematching& pm, const PumpSpec& pump,
                      const FrequencyGrid& grid);

/// f(a, b) = alpha(pump detuning) * phi(dk), normalised on the grid.
JointAmplitude build_jsa(const Process& process, const Phasematching& pm, const PumpSpec& pump,
                         const FrequencyGrid& grid);

/// Per-arm passband. kGaussian has power transmission exp(-(d - center)^2 / (2 sigma^2)).
struct Passband {
  enum class Kind { kNone, kRectangular, kGaussian };
  Kind kind = Kind::kNone;
  double lo = 0.0;  // rad/s detuning
  double hi = 0.0;
  double center = 0.0;
  double sigma = 0.0;

  static Passband rectangular(double lo, double hi);
  static Passband gaussian(double center, double sigma);
  double amplitude(double detuning) const;
  void validate() const;
};

struct FilterSpec {
  Passband a;
  Passband b;
};

struct FilteredAmplitude {
  JointAmplitude jsa;
  double transmission = 1.0;  // retained fraction of pair probability
};

/// Throws PreconditionError when nothing is transmitted.
FilteredAmplitude apply_filter(const JointAmplitude& jsa, const FilterSpec& filters);

struct PurityReport {
  double schmidt_number = 1.0;
  double purity = 1.0;
  double g2 = 2.0;
  std::vector<double> weights;  // leading Schmidt weights
  // Analyzed arm a, heralding arm b filtered by filters.b (and vice versa).
  std::optional<double> heralded_purity_a;
  std::optional<double> transmission_b;
  std::optional<double> heralded_purity_b;
  std::optional<double> transmission_a;
};

PurityReport purity_report(const JointAmplitude& jsa, const FilterSpec& filters = {},
                           std::size_t keep_weights = 16);
PurityReport purity_report(const Process& process, const Phasematching& pm, const PumpSpec& pump,
                           const FrequencyGrid& grid, const FilterSpec& filters = {});

struct BandwidthSample {
  double bandwidth = 0.0;
  double purity = 0.0;
};

/// Unfiltered purity with the pump bandwidth replaced by each entry.
std::vector<BandwidthSample> purity_vs_bandwidth(const Process& process, const Phasematching& pm,
                                                 const PumpSpec& pump, const FrequencyGrid& grid,
                                                 const std::vector<double>& bandwidths);

/// Pump-shaped state engineering on a symmetric group-velocity-matched process.
/// Throws PreconditionError unless |xi + 1| <= 0.05 and the phasematching is Gaussian.
SchmidtData engineer_state(const PumpSpec& pump, const Process& process, const Phasematching& pm,
                           const FrequencyGrid& grid);

}  // namespace tmo
