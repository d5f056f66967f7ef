#pragma once

// Discrete conservation monitors.

#include "gbo/model.hpp"
#include "gbo/spectral_core.hpp"

namespace gbo {

struct InvariantTriple {
  double integral = 0.0;  // I_h
  double mass = 0.0;      // M_h
  double energy = 0.0;    // E_h, standard or SAV-modified depending on the caller
};

/// I_h = <u, 1>_h.
///
/// The all-ones field does not decay, so the weight-times-value product at the
/// infinity node has a finite nonzero limit, 2 alpha sum_k k (-1)^k c_k, which
/// is included here. For products of two decaying fields that limit is zero.
double l1_integral(const PhysicalField& u, const SpectralGrid& g);

/// M_h = <u, u>_h.
double mass(const PhysicalField& u, const SpectralGrid& g);

/// <u^m, u>_h, the potential moment shared by the energy and the SAV radicand.
double potential_moment(const PhysicalField& u, int m, const SpectralGrid& g);

/// 1/2 <H D u, u>_h, evaluated in coefficient space. Nonnegative.
double dispersive_energy(const PhysicalField& u, const SpectralGrid& g);

/// E_h = 1/2 <H D u, u>_h - <u^m, u>_h / (m (m + 1)).
double energy(const PhysicalField& u, int m, const SpectralGrid& g);

/// Modified energy 1/2 <H D u, u>_h - (v^2 - c0) / (m (m + 1)).
double modified_energy(const SavState& s, int m, const SpectralGrid& g);

/// SAV state with v = sqrt(<u^m, u>_h + c0). Throws std::domain_error if the
/// radicand is not positive.
SavState make_sav_state(PhysicalField u, int m, const SpectralGrid& g, double c0 = 0.0,
                        double tol_c0 = 5.0, double target_c0 = 10.0);

InvariantTriple compute_invariants(const PhysicalField& u, int m, const SpectralGrid& g);
InvariantTriple compute_invariants(const SavState& s, int m, const SpectralGrid& g);

}  // namespace gbo
