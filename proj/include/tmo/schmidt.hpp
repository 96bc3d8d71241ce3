#pragma once

#include <cstddef>

#include "tmo/grid.hpp"
#include "tmo/linalg.hpp"

namespace tmo {

/// Complex amplitude on a two-axis grid, rows along axis a and columns along axis b.
/// Normalised so that sum |f|^2 * cell = 1.
struct JointAmplitude {
  FrequencyGrid grid;
  CMatrix values;

  double norm2() const { return compensated_norm2(values) * grid.cell(); }
  /// Throws PreconditionError when the amplitude vanishes and ResolutionError on non-finite entries.
  void normalize();
};

/// Paired modes under the grid measure: sum_j |g_k(j)|^2 * step_a = 1.
struct SchmidtData {
  RVector weights;  // descending, sum 1
  CMatrix modes_a;  // columns g_k on axis a
  CMatrix modes_b;  // columns h_k on axis b
  FrequencyGrid grid;

  std::size_t size() const { return static_cast<std::size_t>(weights.size()); }
};

/// f(a, b) = sum_k sqrt(lambda_k) g_k(a) h_k(b).
SchmidtData schmidt(const JointAmplitude& jsa);

double schmidt_number(const RVector& weights);
double schmidt_number(const SchmidtData& data);
double purity(const SchmidtData& data);
double marginal_g2(const SchmidtData& data);

/// Max |f - sum sqrt(lambda) g h| over the grid.
double reconstruction_error(const JointAmplitude& jsa, const SchmidtData& data);

}  // namespace tmo
