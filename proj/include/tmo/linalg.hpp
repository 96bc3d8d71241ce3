#pragma once

#include <complex>

#include <Eigen/Dense>

namespace tmo {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr cdouble kI{0.0, 1.0};

/// Kahan-compensated sum of |x|^2 over all entries; ordering is fixed (column-major).
template <typename Derived>
double compensated_norm2(const Eigen::MatrixBase<Derived>& m) {
  double sum = 0.0;
  double carry = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double y = std::norm(m(i, j)) - carry;
      const double t = sum + y;
      carry = (t - sum) - y;
      sum = t;
    }
  }
  return sum;
}

}  // namespace tmo
