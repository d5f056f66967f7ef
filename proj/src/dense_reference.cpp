#include "gbo/dense_reference.hpp"

#include <stdexcept>
#include <string>

namespace gbo {

namespace {

using Eigen::MatrixXcd;

MatrixXcd s1_matrix(int n, double alpha) {
  MatrixXcd s = MatrixXcd::Zero(n, n);
  const Complex f{0.0, 0.5 / alpha};
  for (int p = 0; p < n; ++p) {
    const double k = p - n / 2;
    s(p, p) = f * (2.0 * k + 1.0);
    if (p > 0) s(p, p - 1) = f * k;
    if (p + 1 < n) s(p, p + 1) = f * (k + 1.0);
  }
  return s;
}

MatrixXcd h_matrix(int n) {
  MatrixXcd h = MatrixXcd::Zero(n, n);
  for (int p = 0; p < n; ++p) {
    const double sgn = (p - n / 2 + 0.5) > 0 ? 1.0 : -1.0;
    h(p, p) = Complex{0.0, -sgn};
  }
  return h;
}

// Omega(j, k) = e^{i k theta_j}: maps coefficients to (alpha - i x) u.
MatrixXcd omega(const SpectralGrid& g) {
  const int n = g.size();
  MatrixXcd om(n, n);
  const auto th = g.theta();
  for (int q = 0; q < n; ++q) {
    for (int p = 0; p < n; ++p) {
      const double k = p - n / 2;
      om(q, p) = std::polar(1.0, k * th[static_cast<std::size_t>(q)]);
    }
  }
  return om;
}

MatrixXcd physical(const SpectralGrid& g, const MatrixXcd& coeff_op) {
  const int n = g.size();
  const MatrixXcd om = omega(g);
  const auto xs = g.x();
  // F P with F = Omega^* / N; column 0 vanishes (u = 0 at infinity).
  MatrixXcd fp = om.adjoint() / static_cast<double>(n);
  fp.col(0).setZero();
  for (int q = 1; q < n; ++q) fp.col(q) *= Complex{g.alpha(), -xs[static_cast<std::size_t>(q)]};
  MatrixXcd m = om * coeff_op * fp;
  m.row(0).setZero();
  for (int q = 1; q < n; ++q) m.row(q) /= Complex{g.alpha(), -xs[static_cast<std::size_t>(q)]};
  return m;
}

}  // namespace

MatrixXcd dense_operator(const SpectralGrid& g, DenseOperator which) {
  const int n = g.size();
  if (n > kDenseMaxN) {
    throw std::invalid_argument("dense_operator: N = " + std::to_string(n) +
                                " exceeds oracle limit " + std::to_string(kDenseMaxN));
  }
  const MatrixXcd s1 = s1_matrix(n, g.alpha());
  switch (which) {
    case DenseOperator::S1: return s1;
    case DenseOperator::S2: return s1 * s1;
    case DenseOperator::H: return h_matrix(n);
    case DenseOperator::DPhys: return physical(g, s1);
    case DenseOperator::HDPhys: return physical(g, h_matrix(n) * s1);
    case DenseOperator::HS2Phys: return physical(g, h_matrix(n) * (s1 * s1));
  }
  throw std::invalid_argument("dense_operator: unknown operator");
}

MatrixXcd dense_weighted(const SpectralGrid& g, DenseOperator which) {
  if (which == DenseOperator::S1 || which == DenseOperator::S2 || which == DenseOperator::H) {
    throw std::invalid_argument("dense_weighted: requires a physical-space operator");
  }
  MatrixXcd m = dense_operator(g, which);
  const auto w = g.weights();
  for (int q = 0; q < g.size(); ++q) m.row(q) *= w[static_cast<std::size_t>(q)] / g.size();
  return m;
}

double hermitian_part_norm(const Eigen::MatrixXcd& m) {
  return (0.5 * (m + m.adjoint())).cwiseAbs().maxCoeff();
}

double antihermitian_part_norm(const Eigen::MatrixXcd& m) {
  return (0.5 * (m - m.adjoint())).cwiseAbs().maxCoeff();
}

PhysicalField apply_dense(const Eigen::MatrixXcd& op, const PhysicalField& u) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(u.size()));
  for (std::size_t i = 0; i < u.size(); ++i) v(static_cast<Eigen::Index>(i)) = u[i];
  const Eigen::VectorXcd r = op * v;
  PhysicalField out(u.size());
  for (std::size_t i = 1; i < u.size(); ++i) out[i] = r(static_cast<Eigen::Index>(i)).real();
  return out;
}

}  // namespace gbo
