// SPDX-License-Identifier: Apache-2.0
#include "spikedyn/semicircle.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "spikedyn/error.hpp"

namespace spikedyn {

QuadratureRule gauss_legendre(int n, double a, double b) {
  require(n >= 1, "gauss_legendre: need at least one node");
  QuadratureRule r;
  r.kind = QuadratureRule::Kind::gauss_legendre;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        // refresh derivative at the converged node
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        break;
      }
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = mid - half * x;
    r.nodes[n - 1 - i] = mid + half * x;
    r.weights[i] = r.weights[n - 1 - i] = half * w;
  }
  if (n % 2 == 1) r.nodes[m - 1] = mid;
  return r;
}

QuadratureRule trapezoid(int n, double a, double b) {
  require(n >= 2, "trapezoid: need at least two nodes");
  QuadratureRule r;
  r.kind = QuadratureRule::Kind::trapezoid;
  r.nodes.resize(n);
  r.weights.assign(n, (b - a) / (n - 1));
  for (int i = 0; i < n; ++i) r.nodes[i] = a + (b - a) * i / (n - 1);
  r.weights.front() *= 0.5;
  r.weights.back() *= 0.5;
  return r;
}

QuadratureRule composite_gauss_legendre(const std::vector<double>& breaks, int m) {
  QuadratureRule base = gauss_legendre(m, -1.0, 1.0);
  QuadratureRule r;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    double mid = 0.5 * (breaks[k] + breaks[k + 1]), half = 0.5 * (breaks[k + 1] - breaks[k]);
    if (half <= 0.0) continue;
    for (int i = 0; i < m; ++i) {
      r.nodes.push_back(mid + half * base.nodes[i]);
      r.weights.push_back(half * base.weights[i]);
    }
  }
  return r;
}

double mu_sc(double s) {
  if (std::abs(s) >= 2.0) return 0.0;
  return std::sqrt(4.0 - s * s) / (2.0 * std::numbers::pi);
}

Complex g_sc(Complex z) {
  if (z.imag() == 0.0 && std::abs(z.real()) < 2.0)
    fail(ErrorCode::domain, "g_sc: z lies on the support [-2, 2]");
  return 0.5 * (-z + std::sqrt(z - 2.0) * std::sqrt(z + 2.0));
}

namespace {

// Power series sum_k (x/2)^{2k+nu} / (k!(k+nu)!)
double bessel_series(int nu, double x) {
  double t = nu == 0 ? 1.0 : 0.5 * x;
  double sum = t, q = 0.25 * x * x;
  for (int k = 1; k < 500; ++k) {
    t *= q / (double(k) * (k + nu));
    sum += t;
    if (t < 1e-17 * sum) break;
  }
  return sum;
}

// e^{-x} I_nu(x) by the large-argument expansion
double bessel_asymptotic_scaled(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0, prev = 1.0;
  for (int k = 1; k < 200; ++k) {
    double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (8.0 * k * x);
    if (std::abs(term) > std::abs(prev)) break;
    sum += term;
    prev = term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

constexpr double kSeriesLimit = 30.0;

double scaled_bessel(int nu, double x) {
  require(x >= 0.0, "bessel: x must be non-negative");
  if (x < kSeriesLimit) return bessel_series(nu, x) * std::exp(-x);
  return bessel_asymptotic_scaled(nu, x);
}

double unscaled_bessel(int nu, double x) {
  require(x >= 0.0, "bessel: x must be non-negative");
  if (x < kSeriesLimit) return bessel_series(nu, x);
  double s = bessel_asymptotic_scaled(nu, x);
  double logv = std::log(s) + x;
  if (logv >= std::log(std::numeric_limits<double>::max()))
    fail(ErrorCode::overflow, "bessel: I_nu(x) exceeds the double range, use the scaled variant");
  return s * std::exp(x);
}

}  // namespace

double bessel_i0(double x) { return unscaled_bessel(0, x); }
double bessel_i1(double x) { return unscaled_bessel(1, x); }
double bessel_i0_scaled(double x) { return scaled_bessel(0, x); }
double bessel_i1_scaled(double x) { return scaled_bessel(1, x); }

double m_lambda_scaled(double lambda, double tau) {
  require(lambda > 0.0 && tau >= 0.0, "m_lambda: need lambda > 0 and tau >= 0");
  if (tau == 0.0) return 1.0;
  double x = 2.0 * tau / std::sqrt(lambda);
  if (x < 1e-150) return 1.0;
  return 2.0 * bessel_i1_scaled(x) / x;
}

double m_lambda(double lambda, double tau) {
  double s = m_lambda_scaled(lambda, tau);
  double x = 2.0 * tau / std::sqrt(lambda);
  if (std::log(s) + x >= std::log(std::numeric_limits<double>::max()))
    fail(ErrorCode::overflow, "m_lambda: value exceeds the double range, use m_lambda_scaled");
  return s * std::exp(x);
}

double m_lambda_scaled_quadrature(double lambda, double tau, int nodes) {
  require(lambda > 0.0 && tau >= 0.0, "m_lambda: need lambda > 0 and tau >= 0");
  const double x = 2.0 * tau / std::sqrt(lambda);
  QuadratureRule r = gauss_legendre(nodes, 0.0, std::numbers::pi);
  return r.integrate([&](double th) {
    double s = std::sin(th);
    // cos(th) - 1 = -2 sin^2(th/2)
    double h = std::sin(0.5 * th);
    return (2.0 / std::numbers::pi) * s * s * std::exp(-2.0 * x * h * h);
  });
}

double m_lambda_quadrature(double lambda, double tau, int nodes) {
  require(lambda > 0.0 && tau >= 0.0, "m_lambda: need lambda > 0 and tau >= 0");
  const double x = 2.0 * tau / std::sqrt(lambda);
  double v = semicircle_integrate([&](double s) { return std::exp(0.5 * x * s); }, nodes);
  if (!std::isfinite(v)) fail(ErrorCode::overflow, "m_lambda: value exceeds the double range");
  return v;
}

double laplace_m_lambda(double lambda, double p) {
  require(lambda > 0.0, "laplace_m_lambda: need lambda > 0");
  const double sl = std::sqrt(lambda);
  if (!(p > 2.0 / sl)) fail(ErrorCode::domain, "laplace_m_lambda: need p > 2/sqrt(lambda)");
  return -sl * g_sc(Complex(p * sl, 0.0)).real();
}

}  // namespace spikedyn
