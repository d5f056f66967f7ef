#pragma once

// Pointwise kernels shared by the operators and time steppers. Loops fan out
// over OpenMP threads only once N is large enough to amortize the fork; below
// the threshold they run serially. Reductions are always serial so results do
// not depend on the thread count.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

namespace gbo::kernels {

inline constexpr std::ptrdiff_t kParallelThreshold = 1 << 15;

inline double ipow(double x, int m) {
  double r = 1.0;
  for (int k = 0; k < m; ++k) r *= x;
  return r;
}

/// out_i = u_i^m
inline void power(std::span<const double> u, int m, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for simd if (n >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = ipow(u[i], m);
}

/// y += a x
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for simd if (n >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += a * x[i];
}

/// out = a x + b y
inline void lincomb(double a, std::span<const double> x, double b, std::span<const double> y,
                    std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for simd if (n >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

/// Sup norm. NaN propagates as +inf.
inline double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) {
    const double a = std::abs(v);
    if (!(a <= m)) m = std::isnan(a) ? INFINITY : a;
  }
  return m;
}

/// Sup norm of x - y. NaN propagates as +inf so divergence is never hidden.
inline double max_abs_diff(std::span<const double> x, std::span<const double> y) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = std::abs(x[i] - y[i]);
    if (!(d <= m)) m = std::isnan(d) ? INFINITY : d;
  }
  return m;
}

}  // namespace gbo::kernels
