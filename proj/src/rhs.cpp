#include "gbo/rhs.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gbo/invariants.hpp"
#include "gbo/kernels.hpp"

namespace gbo {

namespace {

// -D(-H D a + scale * b^m / m)
PhysicalField gradient_flux(const PhysicalField& a, const PhysicalField& b, double scale, int m,
                            const SpectralGrid& g, double* imag_residue) {
  PhysicalField w = hilbert_derivative(a, g, imag_residue);
  PhysicalField bm(b.size());
  kernels::power(b.view(), m, bm.view());
  kernels::lincomb(-1.0, w.view(), scale / m, bm.view(), w.view());
  w[kInfinityNode] = 0.0;
  PhysicalField f = derivative(w, g, imag_residue);
  for (double& x : f.vals) x = -x;
  return f;
}

}  // namespace

PhysicalField rhs_energy_form(const PhysicalField& u, const ModelParams& p, const SpectralGrid& g,
                              double* imag_residue) {
  return gradient_flux(u, u, 1.0, p.m, g, imag_residue);
}

PhysicalField rhs_mass_form(const PhysicalField& u, const ModelParams& p, const SpectralGrid& g,
                            double* imag_residue) {
  const int m = p.m;
  PhysicalField out = hilbert_second_derivative(u, g, imag_residue);
  const PhysicalField du = derivative(u, g, imag_residue);
  PhysicalField um(u.size());
  kernels::power(u.view(), m, um.view());
  um[kInfinityNode] = 0.0;
  const PhysicalField dum = derivative(um, g, imag_residue);
  const double k = 1.0 / (m + 1.0);
  for (std::size_t i = 1; i < u.size(); ++i) {
    out[i] -= k * (kernels::ipow(u[i], m - 1) * du[i] + dum[i]);
  }
  out[kInfinityNode] = 0.0;
  return out;
}

SavRhs rhs_sav(const PhysicalField& u, double v, double c0, const ModelParams& p,
               const SpectralGrid& g, double* imag_residue) {
  const int m = p.m;
  const double radicand = potential_moment(u, m, g) + c0;
  if (!(radicand > 0.0)) {
    throw std::domain_error("rhs_sav: SAV radicand <u^m,u>_h + C0 = " +
                            std::to_string(radicand) + " is not positive");
  }
  const double root = std::sqrt(radicand);
  SavRhs out;
  out.f = gradient_flux(u, u, v / root, m, g, imag_residue);
  PhysicalField um(u.size());
  kernels::power(u.view(), m, um.view());
  out.g = (m + 1.0) / (2.0 * root) * inner_product(um, out.f, g);
  return out;
}

SavRhs rhs_sav(const SavState& s, const ModelParams& p, const SpectralGrid& g,
               double* imag_residue) {
  return rhs_sav(s.u, s.v, s.c0, p, g, imag_residue);
}

PhysicalField leapfrog_split(const PhysicalField& u_linear, const PhysicalField& u_nonlinear,
                             const ModelParams& p, const SpectralGrid& g, double* imag_residue) {
  return gradient_flux(u_linear, u_nonlinear, 1.0, p.m, g, imag_residue);
}

}  // namespace gbo
