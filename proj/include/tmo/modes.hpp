#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tmo/grid.hpp"
#include "tmo/linalg.hpp"

namespace tmo {

/// d orthonormal spectral modes (columns) sampled on a frequency axis.
struct ModeBasis {
  std::string label;
  FrequencyAxis axis;
  CMatrix vectors;  // points x d

  std::size_t dimension() const { return static_cast<std::size_t>(vectors.cols()); }
  /// Gram matrix under the grid measure.
  CMatrix gram() const;
};

/// Hermite-Gauss modes HG_0..HG_{d-1} of rms width sigma centred at `center` detuning.
/// Throws ResolutionError when the axis span is below 6 sigma sqrt(d).
ModeBasis hermite_gauss_basis(std::size_t d, double center, double sigma, const FrequencyAxis& axis);

/// |<HG_k|g_k>|^2 for the first `count` columns of `modes`, with the Hermite-Gauss centre
/// and width fitted to the first column's intensity moments.
std::vector<double> hermite_gauss_overlaps(const CMatrix& modes, const FrequencyAxis& axis, std::size_t count);

enum class BinKind { kTime, kFrequency };

/// d flat-top bins centred on the axis. Frequency bins: width and spacing in rad/s.
/// Time bins: width and spacing in s, built on the conjugate time grid.
ModeBasis bin_basis(BinKind kind, std::size_t d, double spacing, double width, const FrequencyAxis& axis);

/// Coefficient matrices (columns are basis vectors) of the d + 1 mutually unbiased bases
/// of prime d in {2, 3, 5, 7}; entry 0 is the identity.
std::vector<CMatrix> mub_coefficients(std::size_t d);

/// The d + 1 bases expressed as spectral modes of `basis`.
std::vector<ModeBasis> mub_set(std::size_t d, const ModeBasis& basis);

/// One projective measurement outcome.
struct MeasurementRecord {
  CVector projector;  // unit vector in computational coordinates
  double value = 0.0;  // probability, or counts when shots is set
  std::optional<std::uint64_t> shots;

  double frequency() const { return shots ? value / static_cast<double>(*shots) : value; }
};

struct SamplingSpec {
  std::uint64_t total_shots = 0;
  std::size_t group = 0;  // consecutive projectors forming one measurement setting
  std::uint64_t seed = 0;
};

/// Throws PreconditionError for non-physical rho or non-unit projectors.
void validate_density(const CMatrix& rho, double tol = 1e-9);

std::vector<MeasurementRecord> simulate_projections(const CMatrix& rho, const std::vector<CVector>& projectors,
                                                    const std::optional<SamplingSpec>& sampling = {});

/// Flattens the MUB vectors basis by basis.
std::vector<CVector> mub_projectors(std::size_t d);

/// Linear inversion then projection onto the trace-one PSD set. `response` maps ideal to
/// measured probabilities per projector when supplied.
CMatrix reconstruct(const std::vector<MeasurementRecord>& records, std::size_t d,
                    const std::optional<RMatrix>& response = {});

double fidelity(const CMatrix& rho, const CMatrix& sigma);

/// Seeded random states for test suites.
CMatrix random_pure_state(std::size_t d, std::uint64_t seed);
CMatrix random_mixed_state(std::size_t d, std::uint64_t seed);

}  // namespace tmo
