#pragma once

#include <vector>

#include <Eigen/Dense>

namespace gbo {

/// Butcher coefficients (A, b, c) of an s-stage Runge-Kutta method.
struct ButcherTableau {
  int s = 0;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;

  /// max |c_i - sum_j a_ij|
  double row_sum_defect() const;
  /// max |b_i a_ij + b_j a_ji - b_i b_j|
  double symplectic_defect() const;
};

/// Gauss-Legendre collocation: s = 1 is the implicit midpoint rule, s = 2 the
/// fourth-order two-stage method. Throws std::invalid_argument otherwise.
ButcherTableau gauss_legendre_tableau(int s);

}  // namespace gbo
