#include "gbo/integrators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "gbo/invariants.hpp"
#include "gbo/kernels.hpp"
#include "gbo/rhs.hpp"

namespace gbo {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::CN_MC: return "cn-mc";
    case Scheme::CN_EC: return "cn-ec";
    case Scheme::IRK_MC: return "irk-mc";
    case Scheme::IRK_EC_SAV: return "irk-ec";
    case Scheme::LEAPFROG: return "leapfrog";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& label, std::optional<int>* stages) {
  std::string key;
  for (char ch : label) {
    if (ch == '_') ch = '-';
    if (!std::isspace(static_cast<unsigned char>(ch))) {
      key += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
  }
  std::optional<int> implied;
  if (key.rfind("irk2-", 0) == 0 || key.rfind("irk4-", 0) == 0) {
    implied = key[3] == '2' ? 1 : 2;
    key = "irk-" + key.substr(5);
  }
  if (stages) *stages = implied;
  if (key == "cn-mc") return Scheme::CN_MC;
  if (key == "cn-ec") return Scheme::CN_EC;
  if (key == "irk-mc") return Scheme::IRK_MC;
  if (key == "irk-ec" || key == "irk-ec-sav" || key == "irk-sav") return Scheme::IRK_EC_SAV;
  if (!implied && (key == "leapfrog" || key == "leap-frog")) return Scheme::LEAPFROG;
  throw std::invalid_argument("unknown scheme '" + label + "'");
}

bool is_mass_conserving(Scheme s) { return s == Scheme::CN_MC || s == Scheme::IRK_MC; }

void StepperConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be positive");
  if (!(fp_tol > 0.0)) throw std::invalid_argument("fp_tol must be positive");
  if (fp_maxiter < 1) throw std::invalid_argument("fp_maxiter must be >= 1");
  if (fp_anderson < 0) throw std::invalid_argument("fp_anderson must be >= 0");
  if ((scheme == Scheme::IRK_MC || scheme == Scheme::IRK_EC_SAV) && stages != 1 && stages != 2) {
    throw std::invalid_argument("stages must be 1 or 2");
  }
}

// ---------------------------------------------------------------------------
// Linear solves

ProjectedBandedSolver make_linear_solver(const SpectralGrid& g, LinearPart part, Complex scale) {
  // I - scale L, with L = H S2 for the mass form. The energy form's D H D has
  // an inner infinity-node projection, S1 (I - r r^T / N) H S1, which adds the
  // rank-one term (scale / N) (S1 r)(r^T H S1).
  BandedLu lu = factor_shifted(g, 1.0, -scale, BandedOperator::HS2);
  std::vector<Complex> r = infinity_parity(g);
  if (part == LinearPart::Mass) return ProjectedBandedSolver(std::move(lu), std::move(r));

  const int n = g.size();
  CoefficientField rc(static_cast<std::size_t>(n));
  rc.coeff = r;
  RankOne update;
  update.left = apply_s1(rc, g).coeff;
  update.right.assign(static_cast<std::size_t>(n), Complex{});
  for (int q = 0; q < n; ++q) {
    Complex acc{};
    for (int p = std::max(0, q - 1); p <= std::min(n - 1, q + 1); ++p) {
      acc += r[static_cast<std::size_t>(p)] * h_entry(g, p) * s1_entry(g, p, q);
    }
    update.right[static_cast<std::size_t>(q)] = acc;
  }
  update.sigma = scale / static_cast<double>(n);
  return ProjectedBandedSolver(std::move(lu), std::move(r), std::move(update));
}

StagePreconditioner::StagePreconditioner(const SpectralGrid& g, LinearPart part, double tau,
                                         const Eigen::MatrixXd& a)
    : g_(&g) {
  const Eigen::Index s = a.rows();
  Eigen::VectorXcd lambda;
  if (s == 1) {
    v_ = Eigen::MatrixXcd::Identity(1, 1);
    lambda = a.cast<Complex>().diagonal();
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success) throw std::runtime_error("tableau eigendecomposition failed");
    v_ = es.eigenvectors();
    lambda = es.eigenvalues();
  }
  v_inv_ = v_.inverse();
  solvers_.reserve(static_cast<std::size_t>(s));
  for (Eigen::Index i = 0; i < s; ++i) solvers_.push_back(make_linear_solver(g, part, tau * lambda(i)));
}

void StagePreconditioner::apply(std::vector<PhysicalField>& r, double* imag_residue) const {
  const auto s = r.size();
  if (s != solvers_.size()) throw std::invalid_argument("StagePreconditioner: stage count");
  const auto n = static_cast<std::size_t>(g_->size());
  std::vector<CoefficientField> c;
  c.reserve(s);
  for (const auto& ri : r) c.push_back(g_->forward(ri.view()));

  std::vector<std::vector<Complex>> z(s, std::vector<Complex>(n));
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      const Complex vij = v_inv_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      for (std::size_t p = 0; p < n; ++p) z[i][p] += vij * c[j][p];
    }
    z[i] = solvers_[i].solve(std::move(z[i]));
  }
  for (std::size_t i = 0; i < s; ++i) {
    CoefficientField d(n);
    for (std::size_t j = 0; j < s; ++j) {
      const Complex vij = v_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      for (std::size_t p = 0; p < n; ++p) d[p] += vij * z[j][p];
    }
    r[i] = g_->inverse(d, imag_residue);
  }
}

// ---------------------------------------------------------------------------
// Crank-Nicolson

double cn_ec_quotient(double a, double b, int m) {
  const double den = b * b - a * a;
  if (std::abs(den) < 1e-12 * std::max(1.0, a * a)) {
    return 0.5 * (m + 1.0) * kernels::ipow(0.5 * (a + b), m - 1);
  }
  return (kernels::ipow(b, m + 1) - kernels::ipow(a, m + 1)) / den;
}

double discrete_gradient(double a, double b, int m) {
  // sum_{i=0}^m b^i a^{m-i} by Horner in b
  double acc = 0.0;
  double ai = 1.0;
  for (int i = 0; i <= m; ++i) {
    acc = acc * b + ai;
    ai *= a;
  }
  return acc / (m * (m + 1.0));
}

namespace {

Eigen::MatrixXd midpoint_matrix() { return Eigen::MatrixXd::Constant(1, 1, 0.5); }

void scale_in_place(PhysicalField& u, double s) {
  for (double& x : u.vals) x *= s;
}

// -D(-H D mid + DG(a, b))
PhysicalField cn_ec_rhs(const PhysicalField& a, const PhysicalField& b, int m,
                        const SpectralGrid& g, double* imag_residue) {
  PhysicalField mid(a.size());
  kernels::lincomb(0.5, a.view(), 0.5, b.view(), mid.view());
  PhysicalField w = hilbert_derivative(mid, g, imag_residue);
  for (std::size_t i = 1; i < w.size(); ++i) w[i] = discrete_gradient(a[i], b[i], m) - w[i];
  w[kInfinityNode] = 0.0;
  PhysicalField f = derivative(w, g, imag_residue);
  scale_in_place(f, -1.0);
  return f;
}

std::vector<double> pack(const std::vector<PhysicalField>& fields, const std::vector<double>& extra) {
  std::vector<double> x;
  std::size_t total = extra.size();
  for (const auto& f : fields) total += f.size();
  x.reserve(total);
  for (const auto& f : fields) x.insert(x.end(), f.vals.begin(), f.vals.end());
  x.insert(x.end(), extra.begin(), extra.end());
  return x;
}

std::vector<PhysicalField> unpack(const std::vector<double>& x, int s, std::size_t n) {
  std::vector<PhysicalField> out;
  out.reserve(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) {
    auto first = x.begin() + static_cast<std::ptrdiff_t>(i * n);
    out.emplace_back(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(n)));
  }
  return out;
}

}  // namespace

CnStepper::CnStepper(const SpectralGrid& g, const ModelParams& p, const StepperConfig& cfg,
                     bool energy)
    : g_(&g), p_(p), cfg_(cfg), energy_(energy),
      prec_(g, energy ? LinearPart::Energy : LinearPart::Mass, cfg.tau, midpoint_matrix()) {
  p_.validate();
  cfg_.validate();
}

PhysicalField CnStepper::step(const PhysicalField& un, StepDiagnostics& diag) const {
  const auto n = un.size();
  const double tau = cfg_.tau;
  double* imag = &diag.imag_residue;
  // Unknown: u^{n+1}. Residual u^n + tau f(u^n, u^{n+1}) - u^{n+1}, corrected
  // through (I - tau/2 L)^-1.
  auto map = [&](const std::vector<double>& x, double& residual) {
    PhysicalField b(x);
    PhysicalField f;
    if (energy_) {
      f = cn_ec_rhs(un, b, p_.m, *g_, imag);
    } else {
      PhysicalField mid(n);
      kernels::lincomb(0.5, un.view(), 0.5, b.view(), mid.view());
      f = rhs_mass_form(mid, p_, *g_, imag);
    }
    std::vector<PhysicalField> r(1, PhysicalField(n));
    for (std::size_t i = 0; i < n; ++i) r[0][i] = un[i] + tau * f[i] - b[i];
    residual = kernels::max_abs(r[0].view());
    prec_.apply(r, imag);
    for (std::size_t i = 0; i < n; ++i) b[i] += r[0][i];
    b[kInfinityNode] = 0.0;
    return std::move(b.vals);
  };
  return PhysicalField(fixed_point_solve(map, un.vals, cfg_.fixed_point(), diag));
}

PhysicalField cn_step_mc(const PhysicalField& un, const ModelParams& p, const SpectralGrid& g,
                         const StepperConfig& cfg, StepDiagnostics* diag) {
  StepDiagnostics local;
  return CnStepper(g, p, cfg, false).step(un, diag ? *diag : local);
}

PhysicalField cn_step_ec(const PhysicalField& un, const ModelParams& p, const SpectralGrid& g,
                         const StepperConfig& cfg, StepDiagnostics* diag) {
  StepDiagnostics local;
  return CnStepper(g, p, cfg, true).step(un, diag ? *diag : local);
}

// ---------------------------------------------------------------------------
// Symplectic IRK

IrkStepper::IrkStepper(const SpectralGrid& g, const ModelParams& p, const StepperConfig& cfg,
                       const ButcherTableau& tab, LinearPart part)
    : g_(&g), p_(p), cfg_(cfg), tab_(tab), prec_(g, part, cfg.tau, tab.a) {
  p_.validate();
  cfg_.validate();
}

PhysicalField IrkStepper::step_mc(const PhysicalField& un, StepDiagnostics& diag) const {
  const int s = tab_.s;
  const auto n = un.size();
  const double tau = cfg_.tau;
  double* imag = &diag.imag_residue;

  auto stage_rhs = [&](const std::vector<PhysicalField>& u) {
    std::vector<PhysicalField> f;
    f.reserve(u.size());
    for (const auto& ui : u) f.push_back(rhs_mass_form(ui, p_, *g_, imag));
    return f;
  };

  auto map = [&](const std::vector<double>& x, double& residual) {
    std::vector<PhysicalField> u = unpack(x, s, n);
    const std::vector<PhysicalField> f = stage_rhs(u);
    std::vector<PhysicalField> r(static_cast<std::size_t>(s), un);
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j < s; ++j) kernels::axpy(tau * tab_.a(i, j), f[j].view(), r[i].view());
      kernels::axpy(-1.0, u[i].view(), r[i].view());
    }
    residual = 0.0;
    for (const auto& ri : r) residual = std::max(residual, kernels::max_abs(ri.view()));
    prec_.apply(r, imag);
    for (int i = 0; i < s; ++i) {
      kernels::axpy(1.0, r[i].view(), u[i].view());
      u[i][kInfinityNode] = 0.0;
    }
    return pack(u, {});
  };

  const std::vector<PhysicalField> guess(static_cast<std::size_t>(s), un);
  const auto x = fixed_point_solve(map, pack(guess, {}), cfg_.fixed_point(), diag);
  const std::vector<PhysicalField> f = stage_rhs(unpack(x, s, n));
  PhysicalField next = un;
  for (int i = 0; i < s; ++i) kernels::axpy(tau * tab_.b(i), f[i].view(), next.view());
  next[kInfinityNode] = 0.0;
  return next;
}

SavState IrkStepper::solve_sav(const SavState& sn, StepDiagnostics& diag) const {
  const int s = tab_.s;
  const auto n = sn.u.size();
  const double tau = cfg_.tau;
  double* imag = &diag.imag_residue;

  auto stage_rhs = [&](const std::vector<PhysicalField>& u, const std::vector<double>& v) {
    std::vector<SavRhs> out;
    out.reserve(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out.push_back(rhs_sav(u[i], v[i], sn.c0, p_, *g_, imag));
    return out;
  };

  auto map = [&](const std::vector<double>& x, double& residual) {
    std::vector<PhysicalField> u = unpack(x, s, n);
    std::vector<double> v(x.end() - s, x.end());
    const std::vector<SavRhs> fg = stage_rhs(u, v);
    std::vector<PhysicalField> r(static_cast<std::size_t>(s), sn.u);
    std::vector<double> rv(static_cast<std::size_t>(s), sn.v);
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j < s; ++j) {
        kernels::axpy(tau * tab_.a(i, j), fg[j].f.view(), r[i].view());
        rv[i] += tau * tab_.a(i, j) * fg[j].g;
      }
      kernels::axpy(-1.0, u[i].view(), r[i].view());
      rv[i] -= v[i];
    }
    residual = kernels::max_abs(rv);
    for (const auto& ri : r) residual = std::max(residual, kernels::max_abs(ri.view()));
    prec_.apply(r, imag);
    for (int i = 0; i < s; ++i) {
      kernels::axpy(1.0, r[i].view(), u[i].view());
      u[i][kInfinityNode] = 0.0;
      v[i] += rv[i];
    }
    return pack(u, v);
  };

  const std::vector<PhysicalField> guess(static_cast<std::size_t>(s), sn.u);
  const std::vector<double> vguess(static_cast<std::size_t>(s), sn.v);
  const auto x = fixed_point_solve(map, pack(guess, vguess), cfg_.fixed_point(), diag);
  const std::vector<double> v(x.end() - s, x.end());
  const std::vector<SavRhs> fg = stage_rhs(unpack(x, s, n), v);

  SavState next = sn;
  for (int i = 0; i < s; ++i) {
    kernels::axpy(tau * tab_.b(i), fg[i].f.view(), next.u.view());
    next.v += tau * tab_.b(i) * fg[i].g;
  }
  next.u[kInfinityNode] = 0.0;
  return next;
}

SavState IrkStepper::step_ec_sav(const SavState& sn, StepDiagnostics& diag) const {
  bool adjusted = false;
  SavState start = c0_adjust(sn, p_, *g_, false, &adjusted);
  diag.c0_adjusted = adjusted;
  try {
    return solve_sav(start, diag);
  } catch (const std::domain_error&) {
    // A stage drove the radicand through zero: lift c0 and retry once.
    start = c0_adjust(start, p_, *g_, true);
    diag.c0_adjusted = true;
    return solve_sav(start, diag);
  }
}

PhysicalField irk_step_mc(const PhysicalField& un, const ButcherTableau& tab,
                          const ModelParams& p, const SpectralGrid& g, const StepperConfig& cfg,
                          StepDiagnostics* diag) {
  StepDiagnostics local;
  return IrkStepper(g, p, cfg, tab, LinearPart::Mass).step_mc(un, diag ? *diag : local);
}

SavState irk_step_ec_sav(const SavState& sn, const ButcherTableau& tab, const ModelParams& p,
                         const SpectralGrid& g, const StepperConfig& cfg, StepDiagnostics* diag) {
  StepDiagnostics local;
  return IrkStepper(g, p, cfg, tab, LinearPart::Energy).step_ec_sav(sn, diag ? *diag : local);
}

SavState c0_adjust(SavState s, const ModelParams& p, const SpectralGrid& g, bool force,
                   bool* adjusted) {
  const double moment = potential_moment(s.u, p.m, g);
  if (adjusted) *adjusted = false;
  if (!force && moment + s.c0 >= s.tol_c0) return s;
  const double c0_new = s.target_c0 - moment;
  const double v2 = s.v * s.v + c0_new - s.c0;
  if (v2 < 0.0) {
    throw std::domain_error("c0_adjust: v^2 + C0_new - C0 = " + std::to_string(v2) +
                            " is negative; SAV state is inconsistent");
  }
  // Keep the sign of v so that v remains continuous in time.
  s.v = std::copysign(std::sqrt(v2), s.v);
  s.c0 = c0_new;
  if (adjusted) *adjusted = true;
  return s;
}

// ---------------------------------------------------------------------------
// Leap-Frog

LeapfrogStepper::LeapfrogStepper(const SpectralGrid& g, const ModelParams& p,
                                 const StepperConfig& cfg)
    : g_(&g), p_(p), tau_(cfg.tau), solver_(make_linear_solver(g, LinearPart::Energy, cfg.tau)) {
  p_.validate();
  cfg.validate();
}

PhysicalField LeapfrogStepper::step(const PhysicalField& unm1, const PhysicalField& un,
                                    double* imag_residue) const {
  // (I - tau D H D) u^{n+1} = u^{n-1} + tau D H D u^{n-1} - 2 tau D((u^n)^m / m)
  //                         = u^{n-1} + 2 tau split(u^{n-1} / 2, u^n)
  PhysicalField half = unm1;
  scale_in_place(half, 0.5);
  PhysicalField rhs = leapfrog_split(half, un, p_, *g_, imag_residue);
  kernels::lincomb(1.0, unm1.view(), 2.0 * tau_, rhs.view(), rhs.view());
  rhs[kInfinityNode] = 0.0;
  CoefficientField c = g_->forward(rhs.view());
  c.coeff = solver_.solve(std::move(c.coeff));
  return g_->inverse(c, imag_residue);
}

PhysicalField leapfrog_step(const PhysicalField& unm1, const PhysicalField& un,
                            const ModelParams& p, const SpectralGrid& g,
                            const StepperConfig& cfg, double* imag_residue) {
  return LeapfrogStepper(g, p, cfg).step(unm1, un, imag_residue);
}

PhysicalField leapfrog_start(const PhysicalField& u0, const ModelParams& p, const SpectralGrid& g,
                             const StepperConfig& cfg, StepDiagnostics* diag) {
  return irk_step_mc(u0, gauss_legendre_tableau(2), p, g, cfg, diag);
}

}  // namespace gbo
