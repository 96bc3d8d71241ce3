#include "tmo/grid.hpp"

#include <cmath>

#include <fmt/format.h>

#include "tmo/errors.hpp"

namespace tmo {

std::vector<double> FrequencyAxis::detunings() const {
  std::vector<double> out(points);
  for (std::size_t j = 0; j < points; ++j) out[j] = detuning(j);
  return out;
}

void FrequencyAxis::validate() const {
  if (points < 16) {
    throw ResolutionError(fmt::format("frequency axis needs at least 16 points, got {}", points));
  }
  if (!(span > 0.0) || !std::isfinite(span)) {
    throw PreconditionError(fmt::format("frequency axis span must be positive, got {}", span));
  }
}

void FrequencyGrid::validate() const {
  a.validate();
  b.validate();
}

}  // namespace tmo
