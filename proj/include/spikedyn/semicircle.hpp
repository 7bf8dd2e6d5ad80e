// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

namespace spikedyn {

using Complex = std::complex<double>;

struct QuadratureRule {
  enum class Kind { gauss_legendre, trapezoid };
  std::vector<double> nodes;
  std::vector<double> weights;
  Kind kind = Kind::gauss_legendre;

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

QuadratureRule gauss_legendre(int n, double a, double b);
QuadratureRule trapezoid(int n, double a, double b);
// Gauss-Legendre rule with m nodes on each panel [breaks[k], breaks[k+1]].
QuadratureRule composite_gauss_legendre(const std::vector<double>& breaks, int m);

double mu_sc(double s);
// Integral of f against the semicircle density via s = 2cos(theta).
template <class F>
double semicircle_integrate(F&& f, int nodes = 512);

Complex g_sc(Complex z);

double bessel_i0(double x);
double bessel_i1(double x);
double bessel_i0_scaled(double x);  // e^{-x} I0(x)
double bessel_i1_scaled(double x);  // e^{-x} I1(x)

double m_lambda(double lambda, double tau);
double m_lambda_scaled(double lambda, double tau);  // e^{-2 tau/sqrt(lambda)} M(tau)
double m_lambda_quadrature(double lambda, double tau, int nodes = 512);
double m_lambda_scaled_quadrature(double lambda, double tau, int nodes = 512);

double laplace_m_lambda(double lambda, double p);

}  // namespace spikedyn

#include <cmath>
#include <numbers>

namespace spikedyn {

template <class F>
double semicircle_integrate(F&& f, int nodes) {
  QuadratureRule r = gauss_legendre(nodes, 0.0, std::numbers::pi);
  return r.integrate([&](double th) {
    double s = std::sin(th);
    return (2.0 / std::numbers::pi) * s * s * f(2.0 * std::cos(th));
  });
}

}  // namespace spikedyn
