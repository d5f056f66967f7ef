#pragma once

#include <stdexcept>

#include "gbo/spectral_core.hpp"

namespace gbo {

/// Nonlinearity power of u_t = -(-H u_x + u^m / m)_x.
struct ModelParams {
  int m = 2;

  void validate() const {
    if (m < 1) throw std::invalid_argument("ModelParams: m must be >= 1");
  }
};

/// State of the scalar-auxiliary-variable system. v tracks
/// sqrt(<u^m, u>_h + c0); c0 may be re-chosen mid-run to keep the radicand
/// positive without changing the modified energy.
struct SavState {
  PhysicalField u;
  double v = 0.0;
  double c0 = 0.0;
  double tol_c0 = 5.0;      // adjust once the radicand drops below this
  double target_c0 = 10.0;  // radicand level after an adjustment
};

}  // namespace gbo
