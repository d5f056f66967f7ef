#include "gbo/invariants.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gbo/kernels.hpp"

namespace gbo {

double l1_integral(const PhysicalField& u, const SpectralGrid& g) {
  const auto w = g.weights();
  double acc = 0.0;
  for (std::size_t i = 1; i < u.size(); ++i) acc += w[i] * u[i];

  // lim_{x -> +-inf} (alpha^2 + x^2) u(x) from the trigonometric polynomial
  // (alpha - i x) u = sum_k c_k e^{i k theta}, which vanishes at theta = -pi.
  const CoefficientField c = g.forward(u.view());
  Complex slope{};
  for (std::size_t p = 0; p < c.size(); ++p) {
    const int k = g.mode(p);
    slope += (k % 2 == 0 ? 1.0 : -1.0) * static_cast<double>(k) * c[p];
  }
  acc += 2.0 * g.alpha() * slope.real();
  return std::numbers::pi / (g.size() * g.alpha()) * acc;
}

double mass(const PhysicalField& u, const SpectralGrid& g) { return inner_product(u, u, g); }

double potential_moment(const PhysicalField& u, int m, const SpectralGrid& g) {
  const auto w = g.weights();
  double acc = 0.0;
  for (std::size_t i = 1; i < u.size(); ++i) acc += w[i] * kernels::ipow(u[i], m + 1);
  return std::numbers::pi / (g.size() * g.alpha()) * acc;
}

double dispersive_energy(const PhysicalField& u, const SpectralGrid& g) {
  const CoefficientField c = g.forward(u.view());
  const CoefficientField hd = apply_hilbert(apply_s1(c, g));
  return 0.5 * coefficient_inner_product(hd, c, g).real();
}

double energy(const PhysicalField& u, int m, const SpectralGrid& g) {
  return dispersive_energy(u, g) - potential_moment(u, m, g) / (m * (m + 1.0));
}

double modified_energy(const SavState& s, int m, const SpectralGrid& g) {
  return dispersive_energy(s.u, g) - (s.v * s.v - s.c0) / (m * (m + 1.0));
}

SavState make_sav_state(PhysicalField u, int m, const SpectralGrid& g, double c0, double tol_c0,
                        double target_c0) {
  const double radicand = potential_moment(u, m, g) + c0;
  if (!(radicand > 0.0)) {
    throw std::domain_error("make_sav_state: <u^m,u>_h + C0 = " + std::to_string(radicand) +
                            " is not positive");
  }
  SavState s;
  s.u = std::move(u);
  s.v = std::sqrt(radicand);
  s.c0 = c0;
  s.tol_c0 = tol_c0;
  s.target_c0 = target_c0;
  return s;
}

InvariantTriple compute_invariants(const PhysicalField& u, int m, const SpectralGrid& g) {
  return {l1_integral(u, g), mass(u, g), energy(u, m, g)};
}

InvariantTriple compute_invariants(const SavState& s, int m, const SpectralGrid& g) {
  return {l1_integral(s.u, g), mass(s.u, g), modified_energy(s, m, g)};
}

}  // namespace gbo
