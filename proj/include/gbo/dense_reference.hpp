#pragma once

// Serial dense-matrix reference for the spectral operators. Everything here is
// assembled from explicit DFT matrices and the coefficient recurrences, with no
// FFT involved, so it serves as an independent oracle for the fast path.
// Cost is O(N^3); intended for N <= kDenseMaxN.

#include <Eigen/Dense>

#include "gbo/spectral_core.hpp"

namespace gbo {

inline constexpr int kDenseMaxN = 128;

enum class DenseOperator {
  S1,       // coefficient-space derivative
  S2,       // S1 * S1
  H,        // coefficient-space Hilbert transform
  DPhys,    // P^-1 F^-1 S1 F P
  HDPhys,   // P^-1 F^-1 H S1 F P
  HS2Phys,  // P^-1 F^-1 H S2 F P
};

/// Explicit matrix of the requested operator. Physical-space variants act on
/// nodal vectors; their infinity row and column are zero.
/// Throws std::invalid_argument when N > kDenseMaxN.
Eigen::MatrixXcd dense_operator(const SpectralGrid& g, DenseOperator which);

/// (1/N) conj(P) F^-1 (op) F P for a physical-space operator, i.e. the matrix
/// whose (anti-)Hermitian structure drives the semi-discrete conservation laws.
Eigen::MatrixXcd dense_weighted(const SpectralGrid& g, DenseOperator which);

/// Max-norm of the Hermitian part (M + M^*)/2.
double hermitian_part_norm(const Eigen::MatrixXcd& m);
/// Max-norm of the anti-Hermitian part (M - M^*)/2.
double antihermitian_part_norm(const Eigen::MatrixXcd& m);

/// Applies a dense physical-space operator to a real nodal field.
PhysicalField apply_dense(const Eigen::MatrixXcd& op, const PhysicalField& u);

}  // namespace gbo
