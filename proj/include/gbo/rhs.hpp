#pragma once

// Semi-discrete right-hand sides of u_t = -(-H u_x + u^m / m)_x.
//
// D denotes the physical spectral derivative P^-1 F^-1 S1 F P. Every function
// accepts an optional imag_residue accumulator that receives the largest
// imaginary part discarded by the inverse transforms it performs.

#include <utility>

#include "gbo/model.hpp"
#include "gbo/spectral_core.hpp"

namespace gbo {

/// -D(-H D u + u^m / m). Conserves the discrete energy.
PhysicalField rhs_energy_form(const PhysicalField& u, const ModelParams& p, const SpectralGrid& g,
                              double* imag_residue = nullptr);

/// H S2 u - (u^{m-1} D u + D(u^m)) / (m + 1). Conserves the discrete mass.
PhysicalField rhs_mass_form(const PhysicalField& u, const ModelParams& p, const SpectralGrid& g,
                            double* imag_residue = nullptr);

struct SavRhs {
  PhysicalField f;
  double g = 0.0;
};

/// Right-hand side of the SAV system in (u, v):
///   f = -D(-H D u + u^m v / (m sqrt(R))),  R = <u^m, u>_h + c0,
///   g = (m + 1) / (2 sqrt(R)) <u^m, f>_h.
/// Throws std::domain_error when R <= 0; the caller is expected to adjust c0.
SavRhs rhs_sav(const PhysicalField& u, double v, double c0, const ModelParams& p,
               const SpectralGrid& g, double* imag_residue = nullptr);
SavRhs rhs_sav(const SavState& s, const ModelParams& p, const SpectralGrid& g,
               double* imag_residue = nullptr);

/// -D(-H D u_linear + u_nonlinear^m / m): the energy form with the dispersive
/// and nonlinear arguments decoupled, as used by the Leap-Frog scheme.
PhysicalField leapfrog_split(const PhysicalField& u_linear, const PhysicalField& u_nonlinear,
                             const ModelParams& p, const SpectralGrid& g,
                             double* imag_residue = nullptr);

}  // namespace gbo
