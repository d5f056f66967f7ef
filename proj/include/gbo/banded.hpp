#pragma once

// Banded linear algebra in coefficient space.
//
// The spectral operators H S1 (tridiagonal) and H S2 (pentadiagonal) are
// banded in the rational basis, but the physical-space versions also zero the
// value at the infinity node. In coefficient space that zeroing is the
// orthogonal projector  Pi = I - r r^T / N  with r_k = (-1)^k, so every
// physical-space linear solve becomes a banded solve plus a scalar border.

#include <optional>
#include <span>
#include <vector>

#include "gbo/spectral_core.hpp"

namespace gbo {

/// Complex banded LU with partial pivoting (LAPACK zgbtrf/zgbtrs).
class BandedLu {
 public:
  BandedLu(int n, int kl, int ku);

  int size() const noexcept { return n_; }
  /// Sets A(i, j); valid only before factor() and inside the band.
  void set(int i, int j, Complex v);
  /// Throws std::runtime_error if A is singular.
  void factor();
  /// Overwrites rhs with A^-1 rhs.
  void solve(std::span<Complex> rhs) const;

 private:
  int n_, kl_, ku_, ldab_;
  std::vector<Complex> ab_;
  std::vector<int> ipiv_;
  bool factored_ = false;
};

/// Entry (p, q) of the coefficient-space derivative S1; zero unless |p - q| <= 1.
Complex s1_entry(const SpectralGrid& g, int p, int q);
/// Diagonal entry p of the coefficient-space Hilbert transform, -i sgn(k).
Complex h_entry(const SpectralGrid& g, int p);

enum class BandedOperator { HS1, HS2 };

/// shift * I + scale * op, assembled in band storage and factored.
BandedLu factor_shifted(const SpectralGrid& g, Complex shift, Complex scale, BandedOperator op);

/// r_k = (-1)^k over the modal slots of g.
std::vector<Complex> infinity_parity(const SpectralGrid& g);

/// Rank-one term sigma * left * right^T added to a banded matrix.
struct RankOne {
  std::vector<Complex> left;
  std::vector<Complex> right;
  Complex sigma;
};

/// Solves  (A + sigma a z^T) y + mu r = b,  r^T y = 0  for (y, mu).
///
/// Used for physical-space operators whose coefficient form is banded up to
/// the infinity-node projector: the constraint keeps y in the range of Pi and
/// the border mu absorbs the component of the equation along r.
class ProjectedBandedSolver {
 public:
  ProjectedBandedSolver(BandedLu a, std::vector<Complex> r,
                        std::optional<RankOne> update = std::nullopt);

  std::vector<Complex> solve(std::vector<Complex> b) const;

 private:
  void apply_inverse(std::vector<Complex>& x) const;  // x <- (A + sigma a z^T)^-1 x

  BandedLu a_;
  std::vector<Complex> r_;
  std::optional<RankOne> update_;
  std::vector<Complex> a_inv_left_;  // A^-1 a
  Complex sm_denominator_{1.0};      // 1 + sigma z^T A^-1 a
  std::vector<Complex> m_inv_r_;     // M^-1 r
  Complex r_m_inv_r_{};
};

}  // namespace gbo
