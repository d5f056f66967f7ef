#include <doctest.h>

#include <cmath>

#include "gbo/dense_reference.hpp"
#include "gbo/invariants.hpp"
#include "gbo/kernels.hpp"
#include "gbo/profiles.hpp"
#include "gbo/rhs.hpp"
#include "support.hpp"

using namespace gbo;

namespace {

PhysicalField pow_field(const PhysicalField& u, int m) {
  PhysicalField out(u.size());
  kernels::power(u.view(), m, out.view());
  return out;
}

// u_t = -c u_x for the traveling wave, compared away from the far tails.
double traveling_wave_defect(const PhysicalField& f, const PhysicalField& u, double c,
                             const SpectralGrid& g) {
  const auto du = derivative(u, g);
  double err = 0.0;
  const auto x = g.x();
  for (std::size_t i = 1; i < u.size(); ++i) {
    if (std::abs(x[i]) < 50.0) err = std::max(err, std::abs(f[i] + c * du[i]));
  }
  return err;
}

}  // namespace

TEST_SUITE("rhs") {

TEST_CASE("zero field") {
  const SpectralGrid g(32, 1.0);
  const PhysicalField z(32);
  for (int m : {1, 2, 3}) {
    CHECK(test::sup_norm(rhs_energy_form(z, {m}, g)) == 0.0);
    CHECK(test::sup_norm(rhs_mass_form(z, {m}, g)) == 0.0);
    CHECK(test::sup_norm(leapfrog_split(z, z, {m}, g)) == 0.0);
  }
}

TEST_CASE("dense oracle at N = 32") {
  const SpectralGrid g(32, 1.5);
  const auto d = dense_operator(g, DenseOperator::DPhys);
  const auto hd = dense_operator(g, DenseOperator::HDPhys);
  const auto hs2 = dense_operator(g, DenseOperator::HS2Phys);
  const auto u = test::random_field(g, 21);
  const auto v = test::random_field(g, 22);

  SUBCASE("m = 1 energy form is D(H D u) - D u") {
    const Eigen::MatrixXcd op = d * hd - d;
    CHECK(test::sup_diff(rhs_energy_form(u, {1}, g), apply_dense(op, u)) < 1e-12);
  }
  SUBCASE("m = 2 energy form") {
    PhysicalField inner = apply_dense(hd, u);
    const auto u2 = pow_field(u, 2);
    for (std::size_t i = 1; i < u.size(); ++i) inner[i] -= 0.5 * u2[i];
    CHECK(test::sup_diff(rhs_energy_form(u, {2}, g), apply_dense(d, inner)) < 1e-12);
  }
  SUBCASE("m = 3 mass form") {
    PhysicalField expect = apply_dense(hs2, u);
    const auto du = apply_dense(d, u);
    const auto du3 = apply_dense(d, pow_field(u, 3));
    const auto u2 = pow_field(u, 2);
    for (std::size_t i = 1; i < u.size(); ++i) expect[i] -= (u2[i] * du[i] + du3[i]) / 4.0;
    CHECK(test::sup_diff(rhs_mass_form(u, {3}, g), expect) < 1e-12);
  }
  SUBCASE("leapfrog split") {
    PhysicalField inner = apply_dense(hd, u);
    const auto v2 = pow_field(v, 2);
    for (std::size_t i = 1; i < u.size(); ++i) inner[i] -= 0.5 * v2[i];
    CHECK(test::sup_diff(leapfrog_split(u, v, {2}, g), apply_dense(d, inner)) < 1e-12);
  }
}

TEST_CASE("leapfrog split collapses to the energy form") {
  const SpectralGrid g(64, 2.0);
  const auto u = test::random_field(g, 4);
  CHECK(test::sup_diff(leapfrog_split(u, u, {3}, g), rhs_energy_form(u, {3}, g)) == 0.0);
}

TEST_CASE("semi-discrete conservation identities") {
  const SpectralGrid g(128, 3.0);
  for (unsigned seed = 1; seed <= 4; ++seed) {
    const auto u = test::random_field(g, seed);
    for (int m : {2, 3, 4}) {
      CAPTURE(seed);
      CAPTURE(m);
      const auto fm = rhs_mass_form(u, {m}, g);
      CHECK(std::abs(inner_product(fm, u, g)) < 1e-12 * std::max(1.0, test::sup_norm(fm)));

      const auto fe = rhs_energy_form(u, {m}, g);
      PhysicalField grad = hilbert_derivative(u, g);
      const auto um = pow_field(u, m);
      for (std::size_t i = 1; i < u.size(); ++i) grad[i] -= um[i] / m;
      CHECK(std::abs(inner_product(grad, fe, g)) < 1e-12 * std::max(1.0, test::sup_norm(fe)));
    }
  }
}

TEST_CASE("traveling-wave relation for the soliton") {
  const SpectralGrid g(1024, 25.0);
  const auto u = bo_soliton({2.0, 0.0}, 0.0, g);
  const auto fe = rhs_energy_form(u, {2}, g);
  const auto fm = rhs_mass_form(u, {2}, g);
  CHECK(traveling_wave_defect(fe, u, 2.0, g) < 1e-4);
  CHECK(traveling_wave_defect(fm, u, 2.0, g) < 1e-4);
  // the two forms agree up to spatial truncation on a resolved field
  CHECK(test::sup_diff(fe, fm) < 1e-4);
}

TEST_CASE("SAV right-hand side") {
  const SpectralGrid g(256, 8.0);
  const ModelParams p{2};

  SUBCASE("zero field, v = sqrt(c0)") {
    const auto r = rhs_sav(PhysicalField(256), std::sqrt(5.0), 5.0, p, g);
    CHECK(test::sup_norm(r.f) == 0.0);
    CHECK(r.g == 0.0);
  }
  SUBCASE("synchronized v reproduces the energy form") {
    const auto u = bo_soliton({1.0, 2.0}, 0.0, g);
    const SavState s = make_sav_state(u, 2, g, 1.0);
    const auto r = rhs_sav(s, p, g);
    CHECK(test::sup_diff(r.f, rhs_energy_form(u, p, g)) < 1e-13);
  }
  SUBCASE("outer derivative is orthogonal to its argument") {
    const auto u = test::random_field(g, 8, 0.5);
    const double c0 = 20.0;
    const double v = 3.3;
    const auto r = rhs_sav(u, v, c0, p, g);
    const double root = std::sqrt(potential_moment(u, 2, g) + c0);
    PhysicalField w = hilbert_derivative(u, g);
    const auto u2 = pow_field(u, 2);
    for (std::size_t i = 1; i < u.size(); ++i) w[i] = -w[i] + u2[i] * v / (2.0 * root);
    CHECK(std::abs(inner_product(w, r.f, g)) < 1e-12 * std::max(1.0, test::sup_norm(r.f)));
    CHECK(r.g == doctest::Approx(1.5 / root * inner_product(u2, r.f, g)).epsilon(1e-14));
  }
  SUBCASE("non-positive radicand") {
    PhysicalField u = bo_soliton({1.0, 0.0}, 0.0, g);
    for (auto& x : u.vals) x = -x;
    CHECK_THROWS_AS(rhs_sav(u, 1.0, 0.0, p, g), std::domain_error);
  }
}

}  // TEST_SUITE
