#include "gbo/profiles.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gbo/banded.hpp"
#include "gbo/kernels.hpp"

namespace gbo {

PhysicalField bo_soliton(const SolitonParams& p, double t, const SpectralGrid& g) {
  if (!(p.c > 0.0)) throw std::invalid_argument("bo_soliton: c must be positive");
  const double center = p.x0 + p.c * t;
  return sample(g, [&](double x) {
    const double y = p.c * (x - center);
    return 4.0 * p.c / (1.0 + y * y);
  });
}

PhysicalField sech2_init(double amplitude, const SpectralGrid& g) {
  return sample(g, [&](double x) {
    const double s = 1.0 / std::cosh(x);
    return amplitude * s * s;
  });
}

double profile_residual(const PhysicalField& q, const ModelParams& p, double c,
                        const SpectralGrid& g) {
  const PhysicalField hd = hilbert_derivative(q, g);
  double r = 0.0;
  for (std::size_t i = 1; i < q.size(); ++i) {
    const double v = hd[i] + c * q[i] - kernels::ipow(q[i], p.m) / p.m;
    if (!(std::abs(v) <= r)) r = std::isnan(v) ? INFINITY : std::abs(v);
  }
  return r;
}

namespace {

// Averages Q(x_j) and Q(x_{-j}); node j = -N/2 (infinity) has no partner.
void symmetrize(PhysicalField& q) {
  const std::size_t half = q.size() / 2;
  for (std::size_t j = 1; j < half; ++j) {
    const double avg = 0.5 * (q[half + j] + q[half - j]);
    q[half + j] = avg;
    q[half - j] = avg;
  }
  q[kInfinityNode] = 0.0;
}

}  // namespace

PetviashviliResult petviashvili_solve(const ModelParams& p, double c,
                                      const PetviashviliConfig& cfg, const SpectralGrid& g,
                                      const PhysicalField* initial) {
  const int m = p.m;
  if (m < 2) throw std::invalid_argument("petviashvili_solve: requires m >= 2");
  if (!(c > 0.0)) throw std::invalid_argument("petviashvili_solve: c must be positive");
  const double gamma = cfg.gamma.value_or(m / (m - 1.0));

  // L = c + H D; in coefficient space c I + H S1 plus the infinity border.
  const ProjectedBandedSolver solve_l(factor_shifted(g, c, 1.0, BandedOperator::HS1),
                                      infinity_parity(g));

  PetviashviliResult res;
  res.q = initial ? *initial : sample(g, [](double x) { return std::exp(-x * x); });
  symmetrize(res.q);
  const auto n = res.q.size();
  PhysicalField nl(n);
  for (int it = 0; it <= cfg.maxiter; ++it) {
    res.residual = profile_residual(res.q, p, c, g);
    res.iterations = it;
    if (res.residual <= cfg.tol) return res;
    if (it == cfg.maxiter) break;

    PhysicalField lq = hilbert_derivative(res.q, g);
    kernels::axpy(c, res.q.view(), lq.view());
    kernels::power(res.q.view(), m, nl.view());
    for (double& v : nl.vals) v /= m;
    nl[kInfinityNode] = 0.0;
    const double num = inner_product(lq, res.q, g);
    const double den = inner_product(nl, res.q, g);
    const double s = num / den;
    if (!(s > 0.0) || !std::isfinite(s)) {
      std::ostringstream msg;
      msg << "petviashvili_solve: stabilizing factor " << s << " is not positive at iteration "
          << it;
      throw std::runtime_error(msg.str());
    }
    CoefficientField rhs = g.forward(nl.view());
    rhs.coeff = solve_l.solve(std::move(rhs.coeff));
    res.q = g.inverse(rhs);
    const double factor = std::pow(s, gamma);
    for (double& v : res.q.vals) v *= factor;
    symmetrize(res.q);
  }
  std::ostringstream msg;
  msg << "petviashvili_solve: no convergence after " << cfg.maxiter << " iterations (residual "
      << res.residual << ", tolerance " << cfg.tol << ")";
  throw std::runtime_error(msg.str());
}

}  // namespace gbo
