#include "tmo/schmidt.hpp"

#include <cmath>

#include <Eigen/SVD>
#include <fmt/format.h>

#include "tmo/errors.hpp"

namespace tmo {

void JointAmplitude::normalize() {
  if (!values.allFinite()) throw ResolutionError("joint amplitude has non-finite entries");
  const double n2 = norm2();
  if (!(n2 > 0.0)) throw PreconditionError("joint amplitude vanishes on the grid");
  values /= std::sqrt(n2);
}

SchmidtData schmidt(const JointAmplitude& jsa) {
  if (!jsa.values.allFinite()) throw ResolutionError("joint amplitude has non-finite entries");
  const double da = jsa.grid.a.step();
  const double db = jsa.grid.b.step();
  const CMatrix scaled = jsa.values * std::sqrt(da * db);
  Eigen::BDCSVD<CMatrix> svd(scaled, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtData out;
  out.grid = jsa.grid;
  const RVector s = svd.singularValues();
  out.weights = s.array().square();
  const double total = out.weights.sum();
  if (!(total > 0.0)) throw PreconditionError("joint amplitude vanishes on the grid");
  out.weights /= total;
  out.modes_a = svd.matrixU() / std::sqrt(da);
  out.modes_b = svd.matrixV().conjugate() / std::sqrt(db);
  return out;
}

double schmidt_number(const RVector& weights) {
  const double s = weights.sum();
  return s * s / weights.squaredNorm();
}

double schmidt_number(const SchmidtData& data) { return schmidt_number(data.weights); }

double purity(const SchmidtData& data) { return 1.0 / schmidt_number(data); }

double marginal_g2(const SchmidtData& data) { return 1.0 + purity(data); }

double reconstruction_error(const JointAmplitude& jsa, const SchmidtData& data) {
  const RVector amp = data.weights.array().sqrt() * std::sqrt(jsa.norm2());
  const CMatrix rebuilt = data.modes_a * amp.asDiagonal() * data.modes_b.transpose();
  return (jsa.values - rebuilt).cwiseAbs().maxCoeff();
}

}  // namespace tmo
