#include "gbo/banded.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace gbo {

BandedLu::BandedLu(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1),
      ab_(static_cast<std::size_t>(ldab_) * static_cast<std::size_t>(n)),
      ipiv_(static_cast<std::size_t>(n)) {
  if (n <= 0 || kl < 0 || ku < 0) throw std::invalid_argument("BandedLu: bad dimensions");
}

void BandedLu::set(int i, int j, Complex v) {
  if (factored_) throw std::logic_error("BandedLu::set after factor");
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || i - j > kl_ || j - i > ku_) {
    throw std::out_of_range("BandedLu::set outside band");
  }
  // LAPACK band layout: AB(kl + ku + i - j, j), column-major.
  ab_[static_cast<std::size_t>(kl_ + ku_ + i - j) + static_cast<std::size_t>(j) * ldab_] = v;
}

void BandedLu::factor() {
  const lapack_int info =
      LAPACKE_zgbtrf(LAPACK_COL_MAJOR, n_, n_, kl_, ku_, ab_.data(), ldab_, ipiv_.data());
  if (info != 0) {
    throw std::runtime_error("banded LU failed (zgbtrf info = " + std::to_string(info) + ")");
  }
  factored_ = true;
}

void BandedLu::solve(std::span<Complex> rhs) const {
  if (!factored_) throw std::logic_error("BandedLu::solve before factor");
  if (rhs.size() != static_cast<std::size_t>(n_)) throw std::invalid_argument("BandedLu::solve size");
  const lapack_int info = LAPACKE_zgbtrs(LAPACK_COL_MAJOR, 'N', n_, kl_, ku_, 1, ab_.data(),
                                         ldab_, ipiv_.data(), rhs.data(), n_);
  if (info != 0) throw std::runtime_error("banded solve failed (zgbtrs)");
}

namespace {

Complex s1_entry(int n, double alpha, int p, int q) {
  const double k = p - n / 2;
  const Complex f{0.0, 0.5 / alpha};
  if (q == p) return f * (2.0 * k + 1.0);
  if (q == p - 1) return f * k;
  if (q == p + 1) return f * (k + 1.0);
  return {};
}

Complex h_entry(int n, int p) { return (p >= n / 2) ? Complex{0.0, -1.0} : Complex{0.0, 1.0}; }

}  // namespace

Complex s1_entry(const SpectralGrid& g, int p, int q) { return s1_entry(g.size(), g.alpha(), p, q); }

Complex h_entry(const SpectralGrid& g, int p) { return h_entry(g.size(), p); }

BandedLu factor_shifted(const SpectralGrid& g, Complex shift, Complex scale, BandedOperator op) {
  const int n = g.size();
  const double alpha = g.alpha();
  const int bw = op == BandedOperator::HS1 ? 1 : 2;
  // zgbtrf with pivoting needs kl extra superdiagonals of fill; ldab covers it.
  BandedLu lu(n, bw, bw);
  for (int p = 0; p < n; ++p) {
    for (int q = std::max(0, p - bw); q <= std::min(n - 1, p + bw); ++q) {
      Complex entry{};
      if (op == BandedOperator::HS1) {
        entry = s1_entry(n, alpha, p, q);
      } else {
        for (int l = std::max(0, p - 1); l <= std::min(n - 1, p + 1); ++l) {
          entry += s1_entry(n, alpha, p, l) * s1_entry(n, alpha, l, q);
        }
      }
      entry *= h_entry(n, p) * scale;
      if (p == q) entry += shift;
      lu.set(p, q, entry);
    }
  }
  lu.factor();
  return lu;
}

std::vector<Complex> infinity_parity(const SpectralGrid& g) {
  std::vector<Complex> r(static_cast<std::size_t>(g.size()));
  for (std::size_t p = 0; p < r.size(); ++p) r[p] = (g.mode(p) % 2 == 0) ? 1.0 : -1.0;
  return r;
}

namespace {

Complex dot(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  Complex acc{};
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

ProjectedBandedSolver::ProjectedBandedSolver(BandedLu a, std::vector<Complex> r,
                                             std::optional<RankOne> update)
    : a_(std::move(a)), r_(std::move(r)), update_(std::move(update)) {
  if (update_) {
    a_inv_left_ = update_->left;
    a_.solve(a_inv_left_);
    sm_denominator_ = 1.0 + update_->sigma * dot(update_->right, a_inv_left_);
    if (std::abs(sm_denominator_) < 1e-14) {
      throw std::runtime_error("ProjectedBandedSolver: rank-one update is singular");
    }
  }
  m_inv_r_ = r_;
  apply_inverse(m_inv_r_);
  r_m_inv_r_ = dot(r_, m_inv_r_);
  if (std::abs(r_m_inv_r_) < 1e-300) {
    throw std::runtime_error("ProjectedBandedSolver: degenerate border");
  }
}

void ProjectedBandedSolver::apply_inverse(std::vector<Complex>& x) const {
  a_.solve(x);
  if (update_) {
    const Complex coef = update_->sigma * dot(update_->right, x) / sm_denominator_;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= coef * a_inv_left_[i];
  }
}

std::vector<Complex> ProjectedBandedSolver::solve(std::vector<Complex> b) const {
  apply_inverse(b);
  const Complex mu = dot(r_, b) / r_m_inv_r_;
  for (std::size_t i = 0; i < b.size(); ++i) b[i] -= mu * m_inv_r_[i];
  return b;
}

}  // namespace gbo
