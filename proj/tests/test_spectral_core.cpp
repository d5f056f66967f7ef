#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gbo/dense_reference.hpp"
#include "gbo/profiles.hpp"
#include "gbo/spectral_core.hpp"
#include "support.hpp"

using namespace gbo;
using gbo::test::lorentzian;
using std::numbers::pi;

namespace {

CoefficientField unit(const SpectralGrid& g, int k) {
  CoefficientField c(static_cast<std::size_t>(g.size()));
  c[static_cast<std::size_t>(k + g.size() / 2)] = 1.0;
  return c;
}

Complex at(const CoefficientField& c, const SpectralGrid& g, int k) {
  return c[static_cast<std::size_t>(k + g.size() / 2)];
}

double max_abs(const CoefficientField& c) {
  double m = 0.0;
  for (const auto& z : c.coeff) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

TEST_SUITE("spectral_core") {

TEST_CASE("grid construction") {
  SUBCASE("N = 4, alpha = 2") {
    const SpectralGrid g = build_grid(4, 2.0);
    const auto th = g.theta();
    const auto x = g.x();
    CHECK(th[0] == doctest::Approx(-pi));
    CHECK(th[1] == doctest::Approx(-pi / 2));
    CHECK(th[2] == 0.0);
    CHECK(th[3] == doctest::Approx(pi / 2));
    CHECK(std::isinf(x[kInfinityNode]));
    CHECK(x[1] == doctest::Approx(-2.0));
    CHECK(x[2] == 0.0);
    CHECK(x[3] == doctest::Approx(2.0));
  }
  SUBCASE("N = 8, alpha = 1") {
    const SpectralGrid g(8, 1.0);
    // node j sits at slot j + N/2
    CHECK(g.x()[4 + 1] == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-14));
    CHECK(g.x()[4 + 2] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("N = 1024, alpha = 25") {
    const SpectralGrid g(1024, 25.0);
    CHECK(g.nodes_in_mapped_interval() == 512);
    const auto x = g.x();
    for (std::size_t i = 2; i < x.size(); ++i) CHECK_MESSAGE(x[i] > x[i - 1], "node ", i);
    CHECK(x[512] == 0.0);
    CHECK(g.weights()[kInfinityNode] == 0.0);
    CHECK(g.weights()[600] == doctest::Approx(625.0 + x[600] * x[600]));
  }
  SUBCASE("invalid input") {
    CHECK_THROWS_AS(SpectralGrid(7, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SpectralGrid(2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SpectralGrid(8, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(SpectralGrid(8, -1.0), std::invalid_argument);
  }
}

TEST_CASE("transforms") {
  const SpectralGrid g(64, 3.0);
  const double a = g.alpha();

  SUBCASE("lorentzian is rho_0 + rho_-1") {
    const auto u = sample(g, [&](double x) { return lorentzian(a, x); });
    const auto c = forward_transform(u, g);
    CHECK(std::abs(at(c, g, 0) - 1.0) < 1e-13);
    CHECK(std::abs(at(c, g, -1) - 1.0) < 1e-13);
    for (int k = -32; k < 32; ++k) {
      if (k != 0 && k != -1) CHECK_MESSAGE(std::abs(at(c, g, k)) < 1e-13, "k = ", k);
    }
  }
  SUBCASE("e_0 + e_-1 maps back to the lorentzian") {
    auto c = unit(g, 0);
    c[static_cast<std::size_t>(-1 + 32)] = 1.0;
    double imag = 0.0;
    const auto u = inverse_transform(c, g, &imag);
    CHECK(u[kInfinityNode] == 0.0);
    CHECK(imag < 1e-14);
    const auto x = g.x();
    for (std::size_t i = 1; i < u.size(); ++i) CHECK(std::abs(u[i] - lorentzian(a, x[i])) < 1e-13);
  }
  SUBCASE("zero") {
    const PhysicalField z(64);
    CHECK(max_abs(forward_transform(z, g)) == 0.0);
    CHECK(test::sup_norm(inverse_transform(CoefficientField(64), g)) == 0.0);
  }
  SUBCASE("round trip on random fields") {
    for (unsigned seed = 1; seed <= 5; ++seed) {
      const auto u = test::random_field(g, seed);
      const auto back = inverse_transform(forward_transform(u, g), g);
      CHECK(test::sup_diff(u, back) < 1e-12);
      CHECK(back[kInfinityNode] == 0.0);
    }
  }
  SUBCASE("size mismatch") {
    CHECK_THROWS_AS(forward_transform(PhysicalField(32), g), std::invalid_argument);
    CHECK_THROWS_AS(inverse_transform(CoefficientField(16), g), std::invalid_argument);
  }
  SUBCASE("interpolant reproduces nodal values and the sampled function") {
    const auto u = sample(g, [&](double x) { return lorentzian(a, x); });
    const auto c = forward_transform(u, g);
    CHECK(interpolate(c, g, g.x()[40]) == doctest::Approx(u[40]).epsilon(1e-13));
    CHECK(interpolate(c, g, 0.3721) == doctest::Approx(lorentzian(a, 0.3721)).epsilon(1e-12));
  }
}

TEST_CASE("coefficient operators") {
  const SpectralGrid g(16, 2.0);
  const double a = g.alpha();

  SUBCASE("S1 e_0 is the expansion of d rho_0 / dx") {
    const auto d = apply_s1(unit(g, 0), g);
    const Complex f(0.0, 1.0 / (2.0 * a));
    CHECK(std::abs(at(d, g, 0) - f) < 1e-15);
    CHECK(std::abs(at(d, g, 1) - f) < 1e-15);
    for (int k = -8; k < 8; ++k) {
      if (k != 0 && k != 1) CHECK(at(d, g, k) == Complex{});
    }
    // i / (alpha - i x)^2 evaluated through the interpolant
    for (double x : {-3.0, 0.0, 0.7, 5.0}) {
      const Complex exact = Complex(0.0, 1.0) / std::pow(Complex(a, -x), 2);
      const Complex rho0 = 1.0 / Complex(a, -x);
      const Complex rho1 = Complex(a, x) / std::pow(Complex(a, -x), 2);
      CHECK(std::abs(f * (rho0 + rho1) - exact) < 1e-14);
    }
  }
  SUBCASE("S1 truncates at the end modes") {
    const auto d = apply_s1(unit(g, 7), g);  // k = N/2 - 1 would feed k = N/2
    CHECK(std::abs(at(d, g, 7) - Complex(0.0, 15.0 / (2.0 * a))) < 1e-14);
    CHECK(std::abs(at(d, g, 6) - Complex(0.0, 7.0 / (2.0 * a))) < 1e-14);
  }
  SUBCASE("S2 = S1 S1") {
    for (int k : {-8, -3, 0, 5}) {
      const auto e = unit(g, k);
      const auto lhs = apply_s2(e, g);
      const auto rhs = apply_s1(apply_s1(e, g), g);
      for (std::size_t p = 0; p < 16; ++p) CHECK(lhs[p] == rhs[p]);
    }
    const auto s1 = dense_operator(g, DenseOperator::S1);
    const auto s2 = dense_operator(g, DenseOperator::S2);
    CHECK((s2 - s1 * s1).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("zero in, zero out") {
    const CoefficientField z(16);
    CHECK(max_abs(apply_s1(z, g)) == 0.0);
    CHECK(max_abs(apply_s2(z, g)) == 0.0);
    CHECK(max_abs(apply_hilbert(z)) == 0.0);
  }
  SUBCASE("Hilbert transform") {
    const auto h0 = apply_hilbert(unit(g, 0));
    CHECK(at(h0, g, 0) == Complex(0.0, -1.0));
    CHECK(at(apply_hilbert(unit(g, -1)), g, -1) == Complex(0.0, 1.0));
    CoefficientField c(16);
    for (std::size_t p = 0; p < 16; ++p) c[p] = Complex(0.3 * p - 1.1, 1.0 / (1.0 + p));
    const auto hh = apply_hilbert(apply_hilbert(c));
    for (std::size_t p = 0; p < 16; ++p) CHECK(hh[p] == -c[p]);
  }
}

TEST_CASE("physical operators against calculus") {
  const SpectralGrid g(256, 4.0);
  const double a = g.alpha();
  const auto u = sample(g, [&](double x) { return lorentzian(a, x); });
  const auto x = g.x();

  SUBCASE("first derivative") {
    const auto du = derivative(u, g);
    double err = 0.0;
    for (std::size_t i = 1; i < du.size(); ++i) {
      const double s = a * a + x[i] * x[i];
      err = std::max(err, std::abs(du[i] + 4.0 * a * x[i] / (s * s)));
    }
    CHECK(err < 1e-10);
  }
  SUBCASE("second derivative") {
    const auto d2 = inverse_transform(apply_s2(forward_transform(u, g), g), g);
    double err = 0.0;
    for (std::size_t i = 1; i < d2.size(); ++i) {
      const double s = a * a + x[i] * x[i];
      err = std::max(err, std::abs(d2[i] - 4.0 * a * (3.0 * x[i] * x[i] - a * a) / (s * s * s)));
    }
    CHECK(err < 1e-9);
  }
  SUBCASE("Hilbert pair") {
    const auto hu = inverse_transform(apply_hilbert(forward_transform(u, g)), g);
    double err = 0.0;
    for (std::size_t i = 1; i < hu.size(); ++i) {
      err = std::max(err, std::abs(hu[i] - 2.0 * x[i] / (a * a + x[i] * x[i])));
    }
    CHECK(err < 1e-10);
  }
  SUBCASE("derivative of a smooth non-rational datum") {
    const SpectralGrid gf(1024, 25.0);
    const auto s = sample(gf, [](double y) { return 1.0 / std::cosh(y); });
    const auto ds = derivative(s, gf);
    const auto xf = gf.x();
    double err = 0.0;
    for (std::size_t i = 1; i < ds.size(); ++i) {
      err = std::max(err, std::abs(ds[i] + std::tanh(xf[i]) / std::cosh(xf[i])));
    }
    CHECK(err < 1e-9);
  }
}

TEST_CASE("discrete inner product") {
  SUBCASE("two orthogonal modes") {
    const SpectralGrid g(32, 1.5);
    const auto u = sample(g, [&](double x) { return lorentzian(1.5, x); });
    CHECK(inner_product(u, u, g) == doctest::Approx(2.0 * pi / 1.5).epsilon(1e-14));
    CHECK(inner_product(u, PhysicalField(32), g) == 0.0);
  }
  SUBCASE("BO soliton mass") {
    const SpectralGrid g(1024, 25.0);
    const auto u = bo_soliton({2.0, 0.0}, 0.0, g);
    CHECK(std::abs(inner_product(u, u, g) - 16.0 * pi) < 1e-6);
  }
  SUBCASE("quadrature is exact on the span") {
    const SpectralGrid g(32, 2.0);
    const auto u = test::random_span_field(g, 11);
    const auto v = test::random_span_field(g, 12);
    const Complex coeff = coefficient_inner_product(forward_transform(u, g), forward_transform(v, g), g);
    CHECK(std::abs(coeff.real() - inner_product(u, v, g)) < 1e-12);
    CHECK(std::abs(coeff.imag()) < 1e-12);
  }
  SUBCASE("size mismatch") {
    const SpectralGrid g(16, 1.0);
    CHECK_THROWS_AS(inner_product(PhysicalField(16), PhysicalField(8), g), std::invalid_argument);
  }
}

TEST_CASE("grids share plans across threads") {
  const SpectralGrid g(128, 5.0);
  const auto u = test::random_field(g, 3);
  const auto ref = forward_transform(u, g);
  int mismatches = 0;
#pragma omp parallel for reduction(+ : mismatches)
  for (int rep = 0; rep < 16; ++rep) {
    const SpectralGrid copy = g;
    const auto c = forward_transform(u, copy);
    for (std::size_t p = 0; p < c.size(); ++p) mismatches += c[p] != ref[p] ? 1 : 0;
  }
  CHECK(mismatches == 0);
}

}  // TEST_SUITE
