#include "gbo/spectral_core.hpp"

#include <fftw3.h>

#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gbo {

namespace {

// FFTW's planner is not re-entrant; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void require_size(std::size_t got, int n, const char* what) {
  if (got != static_cast<std::size_t>(n)) {
    throw std::invalid_argument(std::string(what) + ": size " + std::to_string(got) +
                                " does not match grid size " + std::to_string(n));
  }
}

}  // namespace

struct SpectralGrid::FftPlans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit FftPlans(int n) {
    std::vector<Complex> scratch(static_cast<std::size_t>(n));
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    std::lock_guard lock(planner_mutex());
    fwd = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!fwd || !bwd) throw std::runtime_error("fftw planning failed");
  }
  ~FftPlans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  void forward(std::vector<Complex>& buf) const {
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(fwd, p, p);
  }
  void backward(std::vector<Complex>& buf) const {
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(bwd, p, p);
  }
};

SpectralGrid::SpectralGrid(int n, double alpha) : n_(n), alpha_(alpha) {
  if (n < 4 || n % 2 != 0) {
    throw std::invalid_argument("build_grid: N must be even and >= 4, got " + std::to_string(n));
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("build_grid: alpha must be positive and finite");
  }
  const auto un = static_cast<std::size_t>(n);
  h_ = 2.0 * std::numbers::pi / n;
  theta_.resize(un);
  x_.resize(un);
  w_.resize(un);
  p_.resize(un);
  parity_.resize(un);
  for (std::size_t i = 0; i < un; ++i) {
    const int j = node(i);
    theta_[i] = j * h_;
    parity_[i] = (i % 2 == 0) ? 1.0 : -1.0;
    if (i == kInfinityNode) {
      x_[i] = -std::numeric_limits<double>::infinity();
      w_[i] = 0.0;
      p_[i] = Complex{};
    } else {
      x_[i] = alpha * std::tan(0.5 * theta_[i]);
      w_[i] = alpha * alpha + x_[i] * x_[i];
      p_[i] = Complex{alpha, -x_[i]};
    }
  }
  plans_ = std::make_shared<const FftPlans>(n);
}

std::size_t SpectralGrid::nodes_in_mapped_interval() const noexcept {
  // theta_j in [-pi/2, pi/2)  <=>  j in [-N/4, N/4) after exact integer scaling.
  std::size_t count = 0;
  for (std::size_t i = 1; i < theta_.size(); ++i) {
    const int j4 = 4 * node(i);
    if (j4 >= -n_ && j4 < n_) ++count;
  }
  return count;
}

// With j = q - N/2 and k = p - N/2,
//   e^{-i k theta_j} = e^{-2 pi i p q / N} (-1)^p (-1)^q (-1)^{N/2},
// so both directions reduce to a standard length-N DFT with sign twiddles.
CoefficientField SpectralGrid::forward(std::span<const double> u) const {
  require_size(u.size(), n_, "forward_transform");
  const auto un = static_cast<std::size_t>(n_);
  std::vector<Complex> buf(un);
  buf[kInfinityNode] = Complex{};
  for (std::size_t q = 1; q < un; ++q) buf[q] = parity_[q] * p_[q] * u[q];
  plans_->forward(buf);
  const double half_sign = (n_ / 2) % 2 == 0 ? 1.0 : -1.0;
  const double scale = half_sign / n_;
  CoefficientField c(un);
  for (std::size_t p = 0; p < un; ++p) c[p] = (scale * parity_[p]) * buf[p];
  return c;
}

PhysicalField SpectralGrid::inverse(const CoefficientField& c, double* imag_residue) const {
  require_size(c.size(), n_, "inverse_transform");
  const auto un = static_cast<std::size_t>(n_);
  std::vector<Complex> buf(un);
  for (std::size_t p = 0; p < un; ++p) buf[p] = parity_[p] * c[p];
  plans_->backward(buf);
  const double half_sign = (n_ / 2) % 2 == 0 ? 1.0 : -1.0;
  PhysicalField u(un);
  double residue = 0.0;
  for (std::size_t q = 1; q < un; ++q) {
    const Complex v = (half_sign * parity_[q]) * buf[q] / p_[q];
    u[q] = v.real();
    residue = std::max(residue, std::abs(v.imag()));
  }
  u[kInfinityNode] = 0.0;
  if (imag_residue) *imag_residue = std::max(*imag_residue, residue);
  return u;
}

SpectralGrid build_grid(int n, double alpha) { return SpectralGrid(n, alpha); }

CoefficientField forward_transform(const PhysicalField& u, const SpectralGrid& g) {
  return g.forward(u.view());
}

PhysicalField inverse_transform(const CoefficientField& c, const SpectralGrid& g,
                                double* imag_residue) {
  return g.inverse(c, imag_residue);
}

CoefficientField apply_s1(const CoefficientField& c, const SpectralGrid& g) {
  require_size(c.size(), g.size(), "apply_s1");
  const std::size_t n = c.size();
  const Complex factor{0.0, 0.5 / g.alpha()};
  CoefficientField out(n);
  for (std::size_t p = 0; p < n; ++p) {
    const double k = g.mode(p);
    Complex acc = (2.0 * k + 1.0) * c[p];
    if (p > 0) acc += k * c[p - 1];
    if (p + 1 < n) acc += (k + 1.0) * c[p + 1];
    out[p] = factor * acc;
  }
  return out;
}

CoefficientField apply_s2(const CoefficientField& c, const SpectralGrid& g) {
  return apply_s1(apply_s1(c, g), g);
}

CoefficientField apply_hilbert(const CoefficientField& c) {
  const std::size_t n = c.size();
  CoefficientField out(n);
  for (std::size_t p = 0; p < n; ++p) {
    // -i sgn(k) c_k, sgn(k) = +1 for k >= 0 (p >= N/2)
    const Complex v = c[p];
    out[p] = (p >= n / 2) ? Complex{v.imag(), -v.real()} : Complex{-v.imag(), v.real()};
  }
  return out;
}

double inner_product(std::span<const double> u, std::span<const double> v,
                     const SpectralGrid& g) {
  require_size(u.size(), g.size(), "inner_product");
  require_size(v.size(), g.size(), "inner_product");
  const auto w = g.weights();
  double acc = 0.0;
  for (std::size_t i = 1; i < u.size(); ++i) acc += w[i] * u[i] * v[i];
  return std::numbers::pi / (g.size() * g.alpha()) * acc;
}

double inner_product(const PhysicalField& u, const PhysicalField& v, const SpectralGrid& g) {
  return inner_product(u.view(), v.view(), g);
}

Complex coefficient_inner_product(const CoefficientField& a, const CoefficientField& b,
                                  const SpectralGrid& g) {
  require_size(a.size(), g.size(), "coefficient_inner_product");
  require_size(b.size(), g.size(), "coefficient_inner_product");
  Complex acc{};
  for (std::size_t p = 0; p < a.size(); ++p) acc += a[p] * std::conj(b[p]);
  return (std::numbers::pi / g.alpha()) * acc;
}

PhysicalField derivative(const PhysicalField& u, const SpectralGrid& g, double* imag_residue) {
  return g.inverse(apply_s1(g.forward(u.view()), g), imag_residue);
}

PhysicalField hilbert_derivative(const PhysicalField& u, const SpectralGrid& g,
                                 double* imag_residue) {
  return g.inverse(apply_hilbert(apply_s1(g.forward(u.view()), g)), imag_residue);
}

PhysicalField hilbert_second_derivative(const PhysicalField& u, const SpectralGrid& g,
                                        double* imag_residue) {
  return g.inverse(apply_hilbert(apply_s2(g.forward(u.view()), g)), imag_residue);
}

double interpolate(const CoefficientField& c, const SpectralGrid& g, double x) {
  require_size(c.size(), g.size(), "interpolate");
  const double a = g.alpha();
  // e^{i theta} = (alpha + i x) / (alpha - i x)
  const Complex z = Complex{a, x} / Complex{a, -x};
  Complex zk = std::pow(z, g.mode(0));
  Complex acc{};
  for (std::size_t p = 0; p < c.size(); ++p) {
    acc += c[p] * zk;
    zk *= z;
  }
  return (acc / Complex{a, -x}).real();
}

}  // namespace gbo
