// SPDX-License-Identifier: Apache-2.0
#include "spikedyn/theory.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "spikedyn/error.hpp"
#include "spikedyn/parallel.hpp"
#include "spikedyn/semicircle.hpp"

namespace spikedyn {

void ScenarioParams::validate() const {
  require(std::isfinite(lambda) && lambda > 0.0, "lambda must be positive");
  require(std::isfinite(alpha) && std::abs(alpha) <= 1.0, "alpha must lie in [-1, 1]");
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    require(std::isfinite(tau_grid[i]) && tau_grid[i] >= 0.0, "tau grid must be non-negative");
    if (i > 0) require(tau_grid[i] > tau_grid[i - 1], "tau grid must be strictly increasing");
  }
}

namespace {

constexpr int kPanelNodes = 16;
constexpr double kFdStep = 1e-4;

class Evaluator {
public:
  Evaluator(double lambda, double alpha) : lambda_(lambda), alpha_(alpha) {
    require(std::isfinite(lambda) && lambda > 0.0, "lambda must be positive");
    require(std::isfinite(alpha) && std::abs(alpha) <= 1.0, "alpha must lie in [-1, 1]");
    sl_ = std::sqrt(lambda);
    beta_ = 1.0 / sl_;
    c_ = 1.0 + 1.0 / lambda;
    kappa_ = (1.0 - beta_) * (1.0 - beta_);
    rate_ = lambda >= 1.0 ? c_ : 2.0 * beta_;
    kq_ = rate_ - 2.0 * beta_;
    plateau_ = lambda > 1.0 ? 1.0 - 1.0 / lambda : 0.0;

    // theta panels graded geometrically toward 0
    std::vector<double> breaks{0.0};
    for (int k = 44; k >= 0; --k) breaks.push_back(std::numbers::pi * std::ldexp(1.0, -k));
    QuadratureRule th = composite_gauss_legendre(breaks, kPanelNodes);
    for (std::size_t i = 0; i < th.nodes.size(); ++i) {
      double t = th.nodes[i];
      double s = std::sin(0.5 * t);
      double u = 2.0 * s * s;  // 1 - cos t
      double ratio = u * (2.0 - u) / (kappa_ + 2.0 * beta_ * u);
      theta_u_.push_back(u);
      theta_w_.push_back(th.weights[i] * ratio * 2.0 / (std::numbers::pi * lambda));
    }
  }

  double lambda() const { return lambda_; }
  double alpha() const { return alpha_; }
  double rate() const { return rate_; }
  double c() const { return c_; }
  double kappa() const { return kappa_; }
  double plateau() const { return plateau_; }

  // e^{kappa tau}(g - alpha plateau) / alpha for lambda > 1; the bare theta integral otherwise
  double tail(double tau) const {
    double s = 0.0;
    for (std::size_t i = 0; i < theta_u_.size(); ++i)
      s += theta_w_[i] * std::exp(-2.0 * beta_ * theta_u_[i] * tau);
    return s;
  }

  // alpha-free overlap in rate scaling
  double phi(double tau) const { return plateau_ + std::exp(-kq_ * tau) * tail(tau); }

  double kernel(double x) const { return std::exp(-kq_ * x) * m_lambda_scaled(lambda_, x); }

  // panel fractions on [0, 1], graded toward both ends, chosen for a reference tau
  std::vector<double> layout(double tau) const {
    double s0 = 0.25 * std::min(1.0, sl_);
    double frac = tau > 0.0 ? std::min(0.5, s0 / tau) : 0.5;
    int levels = std::max(4, int(std::ceil(std::log2(0.5 / frac))) + 1);
    std::vector<double> left{0.0};
    for (int k = levels; k >= 1; --k) left.push_back(std::ldexp(0.5, -k));
    left.push_back(0.5);
    std::vector<double> b = left;
    for (int k = int(left.size()) - 2; k >= 0; --k) b.push_back(1.0 - left[k]);
    return b;
  }

  // p in rate scaling with a fixed panel layout
  double p_rate(double tau, const std::vector<double>& fracs) const {
    if (tau == 0.0) return 1.0;
    std::vector<double> breaks(fracs.size());
    for (std::size_t i = 0; i < fracs.size(); ++i) breaks[i] = fracs[i] * tau;
    breaks.back() = tau;
    QuadratureRule r = composite_gauss_legendre(breaks, kPanelNodes);
    const std::size_t n = r.nodes.size();
    std::vector<double> wf(n);
    for (std::size_t i = 0; i < n; ++i) wf[i] = r.weights[i] * phi(r.nodes[i]);

    double lin = 0.0;
    for (std::size_t i = 0; i < n; ++i) lin += wf[i] * kernel(2.0 * tau - r.nodes[i]);
    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < i; ++j) row += wf[j] * kernel(2.0 * tau - r.nodes[i] - r.nodes[j]);
      quad += wf[i] * (2.0 * row + wf[i] * kernel(2.0 * tau - 2.0 * r.nodes[i]));
    }
    const double a2 = alpha_ * alpha_;
    return kernel(2.0 * tau) + a2 * (2.0 * lin + quad);
  }

  double p_rate(double tau) const { return p_rate(tau, layout(tau)); }

  double q_rate(double tau) const { return alpha_ * phi(tau); }

  double bar_q(double tau) const { return q_rate(tau) / std::sqrt(p_rate(tau)); }

  // 1/2 d/dtau ln p_hat with Richardson extrapolation
  CostP1 cost(double tau) const {
    CostP1 out;
    if (tau == 0.0) {
      out.cost = 1.0 - alpha_ * alpha_;
      out.p1_bar = 0.0;
      return out;
    }
    const double h = kFdStep;
    auto fr = layout(tau);
    auto L = [&](double t) { return std::log(p_rate(t, fr)); };
    double d1, d2;
    if (tau > h) {
      d1 = (L(tau + h) - L(tau - h)) / (2.0 * h);
      d2 = (L(tau + 0.5 * h) - L(tau - 0.5 * h)) / h;
    } else {
      double l0 = L(tau), lh2 = L(tau + 0.5 * h), lh = L(tau + h), l2h = L(tau + 2.0 * h);
      d1 = (-3.0 * l0 + 4.0 * lh - l2h) / (2.0 * h);
      d2 = (-3.0 * l0 + 4.0 * lh2 - lh) / h;
    }
    double d = (4.0 * d2 - d1) / 3.0;
    out.degraded = std::abs(d - d2) > 1e-5;
    double half_rate = rate_ + 0.5 * d;
    double qb = q_rate(tau) / std::sqrt(p_rate(tau, fr));
    out.cost = 1.0 - half_rate;
    out.p1_bar = sl_ * (half_rate - qb * qb);
    return out;
  }

private:
  double lambda_, alpha_, sl_, beta_, c_, kappa_, rate_, kq_, plateau_;
  std::vector<double> theta_u_, theta_w_;
};

// adaptive Gauss-Legendre on [a, b]
double adaptive_integral(const std::function<double(double)>& f, double a, double b, double tol,
                         int depth = 0) {
  static const QuadratureRule g10 = gauss_legendre(10, -1.0, 1.0);
  static const QuadratureRule g20 = gauss_legendre(20, -1.0, 1.0);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  auto apply = [&](const QuadratureRule& r) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(mid + half * r.nodes[i]);
    return s * half;
  };
  double coarse = apply(g10), fine = apply(g20);
  if (std::abs(fine - coarse) <= std::max(tol, 1e-15 * std::abs(fine)) || depth > 40) return fine;
  return adaptive_integral(f, a, mid, 0.5 * tol, depth + 1) +
         adaptive_integral(f, mid, b, 0.5 * tol, depth + 1);
}

}  // namespace

double hat_q_scaled(const ScenarioParams& params, double tau) {
  params.validate();
  require(tau >= 0.0, "tau must be non-negative");
  if (tau == 0.0) return params.alpha;
  const double lam = params.lambda;
  const double kappa = std::pow(1.0 - 1.0 / std::sqrt(lam), 2);
  auto f = [&](double s) { return std::exp(-kappa * s) * m_lambda_scaled(lam, s); };
  // geometric panels sharing the 1e-12 budget, each refined adaptively
  const int panels = tau <= 0.5 ? 1 : 2 + int(std::log2(tau / 0.5));
  double sum = 0.0, a = 0.0, b = std::min(tau, 0.5);
  while (true) {
    sum += adaptive_integral(f, a, b, 1e-12 / panels);
    if (b >= tau) break;
    a = b;
    b = std::min(tau, 2.0 * b);
  }
  return params.alpha * (1.0 - sum / lam);
}

RateScaled rate_scaled(const ScenarioParams& params, double tau) {
  params.validate();
  require(tau >= 0.0, "tau must be non-negative");
  Evaluator ev(params.lambda, params.alpha);
  return {ev.rate(), ev.q_rate(tau), ev.p_rate(tau)};
}

double hat_p_scaled(const ScenarioParams& params, double tau) {
  RateScaled rs = rate_scaled(params, tau);
  double c = 1.0 + 1.0 / params.lambda;
  return std::exp(-2.0 * (c - rs.rate) * tau) * rs.p;
}

ScaledDynamics scaled_dynamics(const ScenarioParams& params, double tau) {
  params.validate();
  require(tau >= 0.0, "tau must be non-negative");
  Evaluator ev(params.lambda, params.alpha);
  double shift = ev.c() - ev.rate();
  ScaledDynamics out;
  out.g = std::exp(-shift * tau) * ev.q_rate(tau);
  out.h = std::exp(-2.0 * shift * tau) * ev.p_rate(tau);
  CostP1 cp = ev.cost(tau);
  out.F_rate = 1.0 - cp.cost;
  return out;
}

double bar_q(const ScenarioParams& params, double tau) {
  params.validate();
  require(tau >= 0.0, "tau must be non-negative");
  return Evaluator(params.lambda, params.alpha).bar_q(tau);
}

double bar_q_lambda1(double alpha, double tau) {
  require(tau >= 0.0, "tau must be non-negative");
  Evaluator ev(1.0, alpha);
  // q_hat = alpha (I0(2 tau) + I1(2 tau)); rate at lambda = 1 is 2
  double q = alpha * (bessel_i0_scaled(2.0 * tau) + bessel_i1_scaled(2.0 * tau));
  return q / std::sqrt(ev.p_rate(tau));
}

CostP1 cost_and_p1(const ScenarioParams& params, double tau) {
  params.validate();
  require(tau >= 0.0, "tau must be non-negative");
  return Evaluator(params.lambda, params.alpha).cost(tau);
}

double noiseless_q(double alpha, double tau) {
  require(tau >= 0.0, "tau must be non-negative");
  return alpha / std::sqrt(alpha * alpha + (1.0 - alpha * alpha) * std::exp(-2.0 * tau));
}

double asymptote_value(double lambda, double alpha, double tau) {
  require(lambda > 0.0 && tau > 0.0, "asymptote: need lambda > 0 and tau > 0");
  const double sgn = alpha > 0.0 ? 1.0 : (alpha < 0.0 ? -1.0 : 0.0);
  const double beta = 1.0 / std::sqrt(lambda);
  const double k = (1.0 - beta) * (1.0 - beta);
  const double sqpi = std::sqrt(std::numbers::pi);
  if (lambda > 1.0) {
    double lim = std::sqrt(1.0 - 1.0 / lambda);
    return sgn * lim + sgn / (2.0 * sqpi * std::pow(lambda, 0.25) * lim * k) * std::pow(tau, -1.5) *
                           std::exp(-k * tau);
  }
  if (lambda < 1.0) {
    double a2 = alpha * alpha;
    double den = std::pow(lambda, 0.625) * k * std::sqrt(1.0 - a2 + a2 / (lambda * k));
    return alpha * std::pow(2.0 / std::numbers::pi, 0.25) / den * std::pow(tau, -0.75);
  }
  return sgn * std::pow(2.0 / (std::numbers::pi * tau), 0.25);
}

AsymptoteReport asymptote(const ScenarioParams& params, double tau) {
  params.validate();
  require(tau > 0.0, "asymptote: tau must be positive");
  AsymptoteReport rep;
  const double lam = params.lambda, alpha = params.alpha;
  rep.regime = lam < 1.0 ? Regime::sub_critical : (lam > 1.0 ? Regime::super_critical : Regime::critical);
  rep.predicted = asymptote_value(lam, alpha, tau);
  if (rep.regime == Regime::super_critical) {
    Evaluator ev(lam, alpha);
    const double sgn = alpha > 0.0 ? 1.0 : (alpha < 0.0 ? -1.0 : 0.0);
    const double lim = std::sqrt(1.0 - 1.0 / lam);
    const double k = ev.kappa();
    AsymptoteDiagnostics d;
    d.psi = std::abs(alpha) * lim * (ev.bar_q(tau) - sgn * lim) * std::exp(k * tau);
    d.phi = alpha * ev.tail(tau);
    d.A = alpha / (2.0 * std::sqrt(std::numbers::pi) * std::pow(lam, 0.25) * k) * std::pow(tau, -1.5);
    rep.diagnostics = d;
  }
  return rep;
}

double watson_q_rate_scaled(double lambda, double alpha, double tau) {
  require(lambda > 0.0 && tau > 0.0, "watson: need lambda > 0 and tau > 0");
  const double k = std::pow(1.0 - 1.0 / std::sqrt(lambda), 2);
  return alpha * std::pow(tau, -1.5) / (2.0 * std::sqrt(std::numbers::pi) * std::pow(lambda, 0.25) * k);
}

double k_lambda(double lambda) {
  require(std::isfinite(lambda) && lambda > 1.0, "k_lambda: need lambda > 1");
  // with s = x + y the double integral collapses to int_0^inf s e^{-kappa s} m~(s) ds
  const double kappa = std::pow(1.0 - 1.0 / std::sqrt(lambda), 2);
  auto f = [&](double s) { return s * std::exp(-kappa * s) * m_lambda_scaled(lambda, s); };
  const double tol = 1e-8;
  double total = 0.0, a = 0.0, b = 0.25;
  for (int it = 0; it < 200; ++it) {
    QuadratureRule r = gauss_legendre(48, a, b);
    total += r.integrate(f);
    // remaining tail bounded by f(b) / (kappa - decay of s^{-1/2})
    double tail = f(b) / kappa;
    if (b > 10.0 / kappa && tail < 1e-3 * tol) return total;
    a = b;
    b *= 2.0;
  }
  fail(ErrorCode::numerical, "k_lambda: truncated integral did not reach tolerance");
}

TheoryCurve theory_curve(const ScenarioParams& params, ThreadPool* pool) {
  params.validate();
  Evaluator ev(params.lambda, params.alpha);
  const auto& g = params.tau_grid;
  TheoryCurve tc;
  tc.tau = g;
  tc.q_bar.resize(g.size());
  tc.cost.resize(g.size());
  tc.p1_bar.resize(g.size());
  std::vector<char> deg(g.size(), 0);
  parallel_for(pool, g.size(), [&](std::size_t i) {
    tc.q_bar[i] = ev.bar_q(g[i]);
    CostP1 cp = ev.cost(g[i]);
    tc.cost[i] = cp.cost;
    tc.p1_bar[i] = cp.p1_bar;
    deg[i] = cp.degraded;
  });
  tc.degraded.assign(deg.begin(), deg.end());
  return tc;
}

}  // namespace spikedyn
