#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tmo/linalg.hpp"

namespace tmo {

/// Ferroelectric domain sequence chi(z) on [0, L].
///
/// boundaries has signs.size() + 1 entries, starts at 0 and ends at L.
struct PolingPattern {
  std::vector<double> boundaries;  // m
  std::vector<int> signs;          // +1 / -1 per domain

  double length() const { return boundaries.empty() ? 0.0 : boundaries.back(); }
  std::size_t domains() const { return signs.size(); }
  /// Throws StructureError.
  void validate() const;
};

PolingPattern uniform_pattern(double length);
/// Period `period`, positive-sign fraction `duty` per period; trailing partial period truncated.
PolingPattern periodic_pattern(double period, double length, double duty);
PolingPattern flipped(const PolingPattern& p);
/// Merges equal-sign neighbours and absorbs domains narrower than `floor` into the previous one.
PolingPattern enforce_min_domain(const PolingPattern& p, double floor = 1e-6);

/// phi(dk) = (1/L) int_0^L chi(z) exp(i dk z) dz, exact for piecewise-constant chi.
/// dk is the material (pre-grating) mismatch.
cdouble phasematching_amplitude(const PolingPattern& p, double dk);

/// Reusable evaluator. Patterns whose boundaries sit on a uniform lattice use a Horner
/// sum over the lattice instead of one exponential per domain.
class PatternEvaluator {
 public:
  explicit PatternEvaluator(const PolingPattern& p);
  cdouble operator()(double dk) const;
  bool on_lattice() const { return lattice_step_ > 0.0; }

 private:
  PolingPattern pattern_;
  double lattice_step_ = 0.0;
  std::vector<double> jumps_;  // chi_{b-1} - chi_b per lattice site
};

struct TargetEnvelope {
  enum class Kind { kGaussian, kCustom };
  Kind kind = Kind::kGaussian;
  double center = 0.0;  // rad/m
  double width = 0.0;   // rad/m, rms of the amplitude
  std::vector<std::pair<double, double>> samples;  // (dk, |phi|) for kCustom

  /// Amplitude of a Gaussian grating profile with peak first-order coefficient 2/pi.
  double gaussian_peak(double length) const;
  void validate() const;
};

struct ApodizeOptions {
  std::size_t window_points = 0;  // 0 picks ~8 samples per uniform side lobe
  std::size_t budget = 0;         // annealing evaluations; 0 means 50 * domains
  double initial_temperature = 0.0;  // 0 derives it from the greedy residual
  double cooling = 0.0;              // 0 derives it from the budget
  double min_domain = 1e-6;          // m
  double required_suppression_db = 13.0;
  bool track = true;  // seed Gaussian targets with the domain-tracking pattern
};

struct ApodizeResult {
  PolingPattern pattern;
  double residual = 0.0;  // least-squares error over the window
  double suppression_db = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Domain-sign optimisation on the lattice of half-periods of `period`:
/// deterministic greedy flip pass, then seeded simulated annealing with geometric cooling.
ApodizeResult apodize(const TargetEnvelope& target, double length, double period,
                      std::uint64_t seed, const ApodizeOptions& options = {});

/// Side-lobe region |dk - center| in [inner, outer], sampled at `points` per side.
struct SidelobeWindow {
  double center = 0.0;
  double inner = 0.0;
  double outer = 0.0;
  std::size_t points = 400;
};

/// 10 log10(max side-lobe power of uniform poling / max side-lobe power of the pattern)
/// over the window; the reference shares the pattern's length and `period`.
double sidelobe_suppression(const PolingPattern& p, double period, const SidelobeWindow& w);

std::string pattern_to_json(const PolingPattern& p);
PolingPattern pattern_from_json(const std::string& text);

}  // namespace tmo
