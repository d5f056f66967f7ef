#pragma once

// Shared fixtures and independent oracles for the unit tests.

#include <cmath>
#include <random>

#include <boost/math/quadrature/sinh_sinh.hpp>

#include "gbo/spectral_core.hpp"

namespace gbo::test {

/// Random real field vanishing at the infinity node. Fixed seed per call site.
inline PhysicalField random_field(const SpectralGrid& g, unsigned seed, double amp = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-amp, amp);
  PhysicalField u(static_cast<std::size_t>(g.size()));
  for (std::size_t i = 1; i < u.size(); ++i) u[i] = dist(rng);
  return u;
}

/// Real field in the span of rho_{-N/2+1} .. rho_{N/2-2}: conjugate-symmetric
/// coefficient pairs c_{-1-k} = conj(c_k), decaying with |k| and clear of the
/// truncated end modes so that S1 acts exactly.
inline PhysicalField random_span_field(const SpectralGrid& g, unsigned seed, int kmax = 6) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  CoefficientField c(static_cast<std::size_t>(g.size()));
  const int half = g.size() / 2;
  for (int k = 0; k <= kmax && k < half - 1; ++k) {
    const Complex z(dist(rng), dist(rng));
    c[static_cast<std::size_t>(k + half)] = z / (1.0 + k);
    c[static_cast<std::size_t>(-1 - k + half)] += std::conj(z) / (1.0 + k);
  }
  return inverse_transform(c, g);
}

inline double lorentzian(double alpha, double x) { return 2.0 * alpha / (alpha * alpha + x * x); }

/// Integral over the whole real line by double-exponential quadrature.
template <typename F>
double integrate_line(F&& f) {
  boost::math::quadrature::sinh_sinh<double> q;
  return q.integrate(f);
}

/// Sup norm of a - b over finite nodes.
inline double sup_diff(const PhysicalField& a, const PhysicalField& b) {
  double m = 0.0;
  for (std::size_t i = 1; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double sup_norm(const PhysicalField& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

}  // namespace gbo::test
