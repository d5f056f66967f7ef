#pragma once

// Rational-basis pseudo-spectral discretization of the real line.
//
// A field u(x) is expanded as u = sum_k c_k rho_k(x) with
//   rho_k(x) = (alpha + i x)^k / (alpha - i x)^(k+1),   k = -N/2 .. N/2-1.
// Under x = alpha tan(theta/2) the products (alpha - i x) u(x) become a
// trigonometric polynomial in theta, so nodal values on the uniform theta
// grid map to coefficients through one FFT.
//
// Storage conventions used throughout the library:
//   * nodal index  i = j + N/2  for node j = -N/2 .. N/2-1
//   * modal index  p = k + N/2  for mode k = -N/2 .. N/2-1
//   * node i = 0 (theta = -pi) is the point at infinity; physical fields hold
//     exactly 0 there and it contributes nothing to transforms or quadrature.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace gbo {

using Complex = std::complex<double>;

/// Index of the node at x = -infinity in every PhysicalField.
inline constexpr std::size_t kInfinityNode = 0;

/// Imaginary residue above which an inverse transform is reported as
/// not-real (diagnostic only).
inline constexpr double kRealnessWarnThreshold = 1e-8;

/// Real nodal values u(x_j). Entry kInfinityNode is identically 0.
struct PhysicalField {
  std::vector<double> vals;

  PhysicalField() = default;
  explicit PhysicalField(std::size_t n) : vals(n, 0.0) {}
  explicit PhysicalField(std::vector<double> v) : vals(std::move(v)) {}

  std::size_t size() const noexcept { return vals.size(); }
  double& operator[](std::size_t i) { return vals[i]; }
  double operator[](std::size_t i) const { return vals[i]; }
  std::span<const double> view() const noexcept { return vals; }
  std::span<double> view() noexcept { return vals; }
};

/// Rational-basis coefficients c_k stored at index k + N/2.
struct CoefficientField {
  std::vector<Complex> coeff;

  CoefficientField() = default;
  explicit CoefficientField(std::size_t n) : coeff(n, Complex{}) {}

  std::size_t size() const noexcept { return coeff.size(); }
  Complex& operator[](std::size_t p) { return coeff[p]; }
  const Complex& operator[](std::size_t p) const { return coeff[p]; }
};

/// Collocation grid x_j = alpha tan(theta_j / 2), theta_j = 2 pi j / N.
///
/// Grids are cheap to copy: FFT plans are shared between copies and plan
/// execution is thread-safe, so one grid may serve concurrent simulations.
class SpectralGrid {
 public:
  /// Throws std::invalid_argument unless N is even, N >= 4 and alpha > 0.
  SpectralGrid(int n, double alpha);

  int size() const noexcept { return n_; }
  double alpha() const noexcept { return alpha_; }
  /// Angular spacing h = 2 pi / N.
  double step() const noexcept { return h_; }

  std::span<const double> theta() const noexcept { return theta_; }
  /// Node positions; x()[kInfinityNode] is -infinity.
  std::span<const double> x() const noexcept { return x_; }
  /// Quadrature weights alpha^2 + x_j^2; the infinity entry holds 0.
  std::span<const double> weights() const noexcept { return w_; }

  /// Basis index k of modal slot p.
  int mode(std::size_t p) const noexcept { return static_cast<int>(p) - n_ / 2; }
  /// Node index j of nodal slot i.
  int node(std::size_t i) const noexcept { return static_cast<int>(i) - n_ / 2; }

  /// Number of nodes with x in [-alpha, alpha), i.e. theta in [-pi/2, pi/2).
  std::size_t nodes_in_mapped_interval() const noexcept;

  CoefficientField forward(std::span<const double> u) const;
  PhysicalField inverse(const CoefficientField& c, double* imag_residue = nullptr) const;

 private:
  struct FftPlans;

  int n_;
  double alpha_;
  double h_;
  std::vector<double> theta_;
  std::vector<double> x_;
  std::vector<double> w_;
  std::vector<Complex> p_;         // alpha - i x_j (0 at infinity)
  std::vector<double> parity_;     // (-1)^i
  std::shared_ptr<const FftPlans> plans_;
};

SpectralGrid build_grid(int n, double alpha);

/// c = F P u: sum_k c_k e^{i k theta_j} = (alpha - i x_j) u_j at finite nodes.
/// Throws std::invalid_argument on a size mismatch.
CoefficientField forward_transform(const PhysicalField& u, const SpectralGrid& g);

/// u_j = Re[(sum_k c_k e^{i k theta_j}) / (alpha - i x_j)], u at infinity = 0.
/// The largest discarded imaginary part is written to imag_residue if given.
PhysicalField inverse_transform(const CoefficientField& c, const SpectralGrid& g,
                                double* imag_residue = nullptr);

/// Derivative in coefficient space (tridiagonal recurrence, truncated at the
/// mode boundaries).
CoefficientField apply_s1(const CoefficientField& c, const SpectralGrid& g);
/// Second derivative, S1 applied twice.
CoefficientField apply_s2(const CoefficientField& c, const SpectralGrid& g);
/// Hilbert transform: c_k -> -i sgn(k) c_k with sgn(0) = +1.
CoefficientField apply_hilbert(const CoefficientField& c);

/// <u, v>_h = pi/(N alpha) sum_j w_j u_j v_j over finite nodes.
double inner_product(std::span<const double> u, std::span<const double> v,
                     const SpectralGrid& g);
double inner_product(const PhysicalField& u, const PhysicalField& v, const SpectralGrid& g);

/// (pi/alpha) sum_k a_k conj(b_k); equals inner_product of the corresponding
/// physical fields.
Complex coefficient_inner_product(const CoefficientField& a, const CoefficientField& b,
                                  const SpectralGrid& g);

// Physical-space operators P^-1 F^-1 (op) F P. Each costs one FFT pair.

/// D u: spectral first derivative.
PhysicalField derivative(const PhysicalField& u, const SpectralGrid& g,
                         double* imag_residue = nullptr);
/// H D u: Hilbert transform of the derivative.
PhysicalField hilbert_derivative(const PhysicalField& u, const SpectralGrid& g,
                                 double* imag_residue = nullptr);
/// H S2 u: Hilbert transform of the second derivative.
PhysicalField hilbert_second_derivative(const PhysicalField& u, const SpectralGrid& g,
                                        double* imag_residue = nullptr);

/// Evaluates the rational interpolant sum_k c_k rho_k(x) at an arbitrary x.
double interpolate(const CoefficientField& c, const SpectralGrid& g, double x);

/// Samples f at the finite nodes; the infinity node is left at 0.
template <typename F>
PhysicalField sample(const SpectralGrid& g, F&& f) {
  PhysicalField u(static_cast<std::size_t>(g.size()));
  const auto xs = g.x();
  for (std::size_t i = 1; i < u.size(); ++i) u[i] = f(xs[i]);
  return u;
}

}  // namespace gbo
