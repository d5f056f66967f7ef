#pragma once

// Initial data: the exact Benjamin-Ono soliton, the sech^2 datum, and
// solitary-wave profiles of H Q_x + c Q - Q^m / m = 0 by Petviashvili iteration.

#include <optional>

#include "gbo/model.hpp"
#include "gbo/spectral_core.hpp"

namespace gbo {

struct SolitonParams {
  double c = 2.0;
  double x0 = 0.0;
};

/// 4c / (1 + c^2 (x - x0 - c t)^2), the exact m = 2 traveling wave.
PhysicalField bo_soliton(const SolitonParams& p, double t, const SpectralGrid& g);

/// amplitude * sech^2(x).
PhysicalField sech2_init(double amplitude, const SpectralGrid& g);

struct PetviashviliConfig {
  std::optional<double> gamma;  // defaults to m / (m - 1)
  double tol = 1e-10;
  int maxiter = 500;
};

struct PetviashviliResult {
  PhysicalField q;
  double residual = 0.0;
  int iterations = 0;
};

/// Solves H Q_x + c Q = Q^m / m for an even positive profile centered at 0.
/// Starts from exp(-x^2) unless an initial profile is supplied. Throws
/// std::invalid_argument for m < 2 or c <= 0, std::runtime_error if the
/// stabilizing factor turns non-positive or the iteration does not converge.
PetviashviliResult petviashvili_solve(const ModelParams& p, double c,
                                      const PetviashviliConfig& cfg, const SpectralGrid& g,
                                      const PhysicalField* initial = nullptr);

/// max_j |H D Q + c Q - Q^m / m| over finite nodes.
double profile_residual(const PhysicalField& q, const ModelParams& p, double c,
                        const SpectralGrid& g);

}  // namespace gbo
