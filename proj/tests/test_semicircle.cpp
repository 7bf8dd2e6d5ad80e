// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "spikedyn/error.hpp"
#include "spikedyn/semicircle.hpp"

using namespace spikedyn;
using std::numbers::pi;

TEST_CASE("quadrature rules") {
  auto t = trapezoid(101, -1.0, 3.0);
  double sum = 0.0;
  for (double w : t.weights) {
    CHECK(w > 0.0);
    sum += w;
  }
  CHECK(sum == doctest::Approx(4.0).epsilon(1e-14));

  auto g = gauss_legendre(10, 0.0, 2.0);
  for (double w : g.weights) CHECK(w > 0.0);
  // exact through degree 19
  CHECK(g.integrate([](double x) { return std::pow(x, 19); }) == doctest::Approx(std::pow(2.0, 20) / 20).epsilon(1e-13));

  auto c = composite_gauss_legendre({0.0, 1.0, 5.0}, 8);
  CHECK(c.nodes.size() == 16);
  CHECK(c.integrate([](double x) { return std::exp(-x); }) == doctest::Approx(1.0 - std::exp(-5.0)).epsilon(1e-14));
  CHECK_THROWS_AS(gauss_legendre(0, 0.0, 1.0), Error);
}

TEST_CASE("mu_sc") {
  CHECK(mu_sc(0.0) == doctest::Approx(1.0 / pi).epsilon(1e-15));
  CHECK(mu_sc(0.0) == doctest::Approx(0.3183098862).epsilon(1e-10));
  CHECK(mu_sc(2.0) == 0.0);
  CHECK(mu_sc(-2.0) == 0.0);
  CHECK(mu_sc(3.0) == 0.0);
  // plain 2000-node rule in s: the square-root edges limit it to roughly n^{-3/2}
  CHECK(std::abs(oracle::gl(mu_sc, -2.0, 2.0, 2000) - 1.0) < 1e-8);
  // the cos substitution is exact up to rounding
  CHECK(std::abs(semicircle_integrate([](double) { return 1.0; }) - 1.0) < 1e-12);
  CHECK(std::abs(semicircle_integrate([](double s) { return s * s; }) - 1.0) < 1e-12);
  CHECK(std::abs(semicircle_integrate([](double s) { return s * s * s * s; }) - 2.0) < 1e-12);
}

TEST_CASE("g_sc values") {
  CHECK(std::abs(g_sc(Complex(2.0, 0.0)) - Complex(-1.0, 0.0)) < 1e-15);
  CHECK(std::abs(g_sc(Complex(-2.0, 0.0)) - Complex(1.0, 0.0)) < 1e-15);
  const double lam = 4.0;
  CHECK(std::abs(g_sc(Complex((1.0 + 1.0 / lam) * std::sqrt(lam), 0.0)) - Complex(-0.5, 0.0)) < 1e-15);
  for (Complex z : {Complex(1e6, 0.0), Complex(-1e6, 0.0), Complex(0.0, 1e6), Complex(6e5, -8e5)})
    CHECK(std::abs(g_sc(z) + 1.0 / z) <= 1e-10);
  CHECK_THROWS_AS(g_sc(Complex(1.0, 0.0)), Error);
  CHECK_THROWS_AS(g_sc(Complex(0.0, 0.0)), Error);
  try {
    g_sc(Complex(-1.5, 0.0));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::domain);
  }
}

TEST_CASE("g_sc matches the Stieltjes integral of the density") {
  for (Complex z : {Complex(0.3, 0.5), Complex(-1.0, 2.0), Complex(3.0, 0.0), Complex(-2.5, -0.1), Complex(1.9, 1.0)}) {
    double re = semicircle_integrate([&](double s) { return (1.0 / (s - z)).real(); }, 4000);
    double im = semicircle_integrate([&](double s) { return (1.0 / (s - z)).imag(); }, 4000);
    CHECK(std::abs(g_sc(z) - Complex(re, im)) < 1e-9);
  }
}

TEST_CASE("g_sc branch and quadratic identity") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> re(-6.0, 6.0), im(1e-6, 6.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Complex z(re(gen), im(gen));
    Complex g = g_sc(z);
    CHECK(g.imag() > 0.0);
    CHECK(g_sc(std::conj(z)).imag() < 0.0);
    worst = std::max(worst, std::abs(g * g + z * g + 1.0));
  }
  for (double x : {2.0, 2.5, 4.0, 100.0, -2.0, -3.0}) {
    Complex z(x, 0.0), g = g_sc(z);
    worst = std::max(worst, std::abs(g * g + z * g + 1.0));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("bessel I1 against the integral definition") {
  CHECK(bessel_i1(0.0) == 0.0);
  CHECK(bessel_i0(0.0) == 1.0);
  double ref = oracle::bessel_i1_integral(1.0, 0.0);
  CHECK(std::abs(bessel_i1(1.0) - ref) <= 1e-12 * ref);
  for (double x : {0.01, 0.5, 3.0, 10.0, 14.9, 15.1, 25.0, 29.99, 30.0, 30.01, 45.0, 100.0, 300.0, 700.0}) {
    double r = oracle::bessel_i1_integral(x, 1.0, 4000);
    double s = bessel_i1_scaled(x);
    INFO("x = " << x);
    CHECK(std::abs(s - r) <= 1e-12 * r);
    CHECK(s > 0.0);
    CHECK(s < 1.0);
    double r0 = oracle::gl([&](double t) { return std::exp(x * (std::cos(t) - 1.0)); }, 0.0, pi, 4000) / pi;
    CHECK(std::abs(bessel_i0_scaled(x) - r0) <= 1e-12 * r0);
  }
  CHECK(std::isfinite(bessel_i1_scaled(700.0)));
  CHECK(bessel_i1_scaled(1e6) > 0.0);
  CHECK(bessel_i1(700.0) > 0.0);
  try {
    bessel_i1(800.0);
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::overflow);
  }
  CHECK_THROWS_AS(bessel_i1(-1.0), Error);
}

TEST_CASE("m_lambda") {
  for (double lam : {0.25, 1.0, 4.0, 25.0}) CHECK(m_lambda(lam, 0.0) == 1.0);
  double ref = oracle::mgf_direct(4.0, 1.0, 2000);
  CHECK(std::abs(m_lambda(4.0, 1.0) - 2.0 * bessel_i1(1.0)) < 1e-14);
  // plain rule in s converges like n^{-3/2}; the cos-substitution rule is exact
  CHECK(std::abs(m_lambda(4.0, 1.0) - ref) <= 1e-8 * ref);
  CHECK(std::abs(m_lambda(4.0, 1.0) - m_lambda_quadrature(4.0, 1.0, 2000)) <= 1e-13 * ref);

  double worst = 0.0;
  for (double lam : {0.25, 1.0, 4.0, 25.0})
    for (double tau : {0.0, 0.1, 1.0, 5.0, 20.0}) {
      double a = m_lambda(lam, tau), b = m_lambda_quadrature(lam, tau);
      worst = std::max(worst, std::abs(a - b) / std::abs(b));
      double as = m_lambda_scaled(lam, tau), bs = m_lambda_scaled_quadrature(lam, tau);
      worst = std::max(worst, std::abs(as - bs) / std::abs(bs));
    }
  CHECK(worst <= 1e-10);

  double tau = 50.0;
  double lead = (1.0 / tau) / std::sqrt(4.0 * pi * tau);
  CHECK(std::abs(m_lambda_scaled(1.0, tau) / lead - 1.0) < 0.05);

  for (double lam : {1e-3, 0.25, 1.0, 1e6})
    for (double t : {0.0, 1e-8, 1.0, 1e3, 1e6}) {
      double v = m_lambda_scaled(lam, t);
      CHECK(v > 0.0);
      CHECK(v <= 1.0);
    }
  try {
    m_lambda(1.0, 1000.0);
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::overflow);
  }
  CHECK_THROWS_AS(m_lambda(0.0, 1.0), Error);
  CHECK_THROWS_AS(m_lambda(1.0, -1.0), Error);
}

TEST_CASE("laplace_m_lambda") {
  for (double lam : {0.25, 1.0, 4.0}) {
    double p = 2.0 / std::sqrt(lam) * (1.0 + 1e-12);
    CHECK(std::abs(laplace_m_lambda(lam, p) - std::sqrt(lam)) < 1e-5);
  }
  CHECK(std::abs(laplace_m_lambda(4.0, 1.25) - 1.0) < 1e-14);
  double direct = oracle::gl_panels([](double t) { return std::exp(-10.0 * t) * m_lambda(1.0, t); }, 0.0, 50.0, 100, 32);
  CHECK(std::abs(laplace_m_lambda(1.0, 10.0) - direct) < 1e-8);
  try {
    laplace_m_lambda(4.0, 1.0);
    FAIL("expected domain error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::domain);
  }
}
