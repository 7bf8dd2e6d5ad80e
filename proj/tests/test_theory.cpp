// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "spikedyn/error.hpp"
#include "spikedyn/parallel.hpp"
#include "spikedyn/theory.hpp"

using namespace spikedyn;

namespace {

ScenarioParams sp(double lambda, double alpha) { return ScenarioParams{lambda, alpha, {}}; }

double kappa(double lambda) {
  double r = 1.0 - 1.0 / std::sqrt(lambda);
  return r * r;
}

// alpha [1 - (1/lambda) int_0^tau e^{-(1+1/lambda)s} M(s) ds] with a fixed composite rule
double hat_q_oracle(double lambda, double alpha, double tau) {
  if (tau == 0.0) return alpha;
  int panels = std::max(8, int(tau * 2));
  double I = oracle::gl_panels(
      [&](double s) { return std::exp(-kappa(lambda) * s) * m_lambda_scaled(lambda, s); }, 0.0, tau, panels, 24);
  return alpha * (1.0 - I / lambda);
}

// unscaled p_hat from the defining integrals; only for small tau
double hat_p_raw_oracle(double lambda, double alpha, double tau) {
  const double c = 1.0 + 1.0 / lambda;
  auto q = [&](double s) { return std::exp(c * s) * hat_q_oracle(lambda, alpha, s); };
  auto rule = gauss_legendre(48, 0.0, tau);
  std::vector<double> qv(rule.nodes.size());
  for (std::size_t i = 0; i < qv.size(); ++i) qv[i] = q(rule.nodes[i]);
  double single = 0.0, dbl = 0.0;
  for (std::size_t i = 0; i < qv.size(); ++i) {
    single += rule.weights[i] * qv[i] * m_lambda(lambda, 2 * tau - rule.nodes[i]);
    for (std::size_t j = 0; j < qv.size(); ++j)
      dbl += rule.weights[i] * rule.weights[j] * qv[i] * qv[j] * m_lambda(lambda, 2 * tau - rule.nodes[i] - rule.nodes[j]);
  }
  return m_lambda(lambda, 2 * tau) + 2 * alpha * single + dbl;
}

}  // namespace

TEST_CASE("params validation") {
  CHECK_THROWS_AS(ScenarioParams({0.0, 0.1, {}}).validate(), Error);
  CHECK_THROWS_AS(ScenarioParams({2.0, 1.5, {}}).validate(), Error);
  CHECK_THROWS_AS(ScenarioParams({2.0, 0.1, {1.0, 0.5}}).validate(), Error);
  CHECK_THROWS_AS(ScenarioParams({2.0, 0.1, {-1.0, 0.5}}).validate(), Error);
  CHECK_NOTHROW(ScenarioParams({2.0, 0.1, {0.0, 0.5}}).validate());
}

TEST_CASE("hat_q_scaled") {
  CHECK(hat_q_scaled(sp(2.0, 0.1), 0.0) == 0.1);
  for (double lam : {0.1, 0.5, 1.0, 2.0, 10.0})
    for (double tau : {0.3, 2.0, 7.5, 30.0}) {
      INFO("lambda " << lam << " tau " << tau);
      CHECK(std::abs(hat_q_scaled(sp(lam, 0.3), tau) - hat_q_oracle(lam, 0.3, tau)) < 1e-12);
    }
  // the tau^{-3/2} e^{-kappa tau} tail is still 2.7e-6 at tau = 60
  CHECK(std::abs(hat_q_scaled(sp(2.0, 0.1), 60.0) - hat_q_oracle(2.0, 0.1, 60.0)) < 1e-12);
  CHECK(std::abs(hat_q_scaled(sp(2.0, 0.1), 300.0) - 0.05) < 1e-9);

  // internal rate scaling is the same function up to an exponential factor
  for (double lam : {0.5, 2.0}) {
    auto rs = rate_scaled(sp(lam, 0.3), 5.0);
    double c = 1.0 + 1.0 / lam;
    CHECK(std::abs(rs.q * std::exp((rs.rate - c) * 5.0) - hat_q_scaled(sp(lam, 0.3), 5.0)) < 1e-12);
  }
}

TEST_CASE("hat_q Watson form for lambda < 1") {
  auto ratio = [](double tau) { return rate_scaled(sp(0.5, 0.3), tau).q / watson_q_rate_scaled(0.5, 0.3, tau); };
  double r40 = ratio(40.0), r200 = ratio(200.0), r1000 = ratio(1000.0);
  MESSAGE("Watson ratio at tau 40/200/1000: " << r40 << " " << r200 << " " << r1000);
  CHECK(r40 < r200);
  CHECK(r200 < r1000);
  CHECK(std::abs(r200 - 1.0) < 0.1);
  CHECK(std::abs(r1000 - 1.0) < 0.01);
}

TEST_CASE("hat_p_scaled") {
  CHECK(std::abs(hat_p_scaled(sp(2.0, 0.1), 0.0) - 1.0) < 1e-14);
  const double a = 0.4, tau = 2.0;
  CHECK(std::abs(hat_p_scaled(sp(1e12, a), tau) - ((1 - a * a) * std::exp(-2 * tau) + a * a)) < 1e-6);
  double v = hat_p_scaled(sp(2.0, 0.1), 20.0);
  CHECK(std::abs(v / (0.01 * 0.5) - 1.0) < 0.02);

  for (double lam : {0.5, 1.0, 2.0})
    for (double t : {0.5, 1.5, 3.0}) {
      double raw = hat_p_raw_oracle(lam, 0.3, t);
      double scaled = hat_p_scaled(sp(lam, 0.3), t) * std::exp(2 * (1 + 1 / lam) * t);
      INFO("lambda " << lam << " tau " << t);
      CHECK(std::abs(scaled / raw - 1.0) < 1e-9);
    }
}

TEST_CASE("bar_q") {
  for (double tau : {0.0, 1.0, 10.0, 100.0}) CHECK(bar_q(sp(2.0, 0.0), tau) == 0.0);
  CHECK(std::abs(bar_q(sp(10.0, 0.1), 10.0) - std::sqrt(0.9)) < 1e-3);
  for (double lam : {0.1, 0.5, 1.0, 2.0, 10.0})
    for (double a : {0.1, 0.5, 0.9})
      for (double tau : {0.0, 0.7, 5.0, 40.0}) {
        double v = bar_q(sp(lam, a), tau);
        CHECK(bar_q(sp(lam, -a), tau) == -v);
        CHECK(std::abs(v) <= 1.0);
      }
}

TEST_CASE("bar_q_lambda1") {
  CHECK(bar_q_lambda1(0.3, 0.0) == doctest::Approx(0.3).epsilon(1e-15));
  double tau = 50.0;
  CHECK(std::abs(bar_q_lambda1(0.5, tau) / std::pow(2.0 / (std::numbers::pi * tau), 0.25) - 1.0) < 0.05);
  CHECK(std::abs(bar_q_lambda1(0.3, 2.0) - bar_q(sp(1.0, 0.3), 2.0)) < 1e-9);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    double t = 0.1 + i * 3.0;
    worst = std::max(worst, std::abs(bar_q_lambda1(0.5, t) - bar_q(sp(1.0, 0.5), t)));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("cost and p1") {
  auto c0 = cost_and_p1(sp(2.0, 0.3), 0.0);
  CHECK(c0.cost == doctest::Approx(1.0 - 0.09).epsilon(1e-12));
  CHECK(c0.p1_bar == 0.0);

  auto c = cost_and_p1(sp(4.0, 0.1), 50.0);
  CHECK(std::abs(c.p1_bar - 1.0) < 1e-2);
  CHECK(std::abs(c.p1_bar - 0.5) > 0.4);
  CHECK_FALSE(c.degraded);

  for (double tau : {0.5, 1.0, 3.0}) {
    const double a = 0.5;
    auto r = cost_and_p1(sp(1e12, a), tau);
    double q = bar_q(sp(1e12, a), tau);
    double e = a * a * std::exp(2 * tau);
    CHECK(std::abs(r.cost - (1.0 - q * q)) < 1e-6);
    CHECK(std::abs(r.cost - (1.0 - e / (1 - a * a + e))) < 1e-6);
    CHECK(std::abs(r.p1_bar / 1e6) < 1e-6);
  }
}

TEST_CASE("cost curve shape at lambda 5") {
  auto p = sp(5.0, 0.1);
  std::vector<double> tau, cost, p1;
  for (int i = 0; i <= 40; ++i) {
    tau.push_back(0.25 * i);
    auto r = cost_and_p1(p, tau.back());
    cost.push_back(r.cost);
    p1.push_back(r.p1_bar);
    CHECK_FALSE(r.degraded);
  }
  for (std::size_t i = 1; i < cost.size(); ++i) CHECK(cost[i] <= cost[i - 1] + 1e-9);
  CHECK(std::abs(cost[40] - cost[32]) < 0.01 * std::abs(cost[0] - cost[40]));
  std::size_t peak = std::max_element(p1.begin(), p1.end()) - p1.begin();
  CHECK(tau[peak] > 1.0);
  CHECK(tau[peak] < 4.0);
  // the p1 contribution overshoots and then relaxes towards 2/sqrt(lambda)
  CHECK(p1[40] < p1[peak] - 0.2);
  CHECK(std::abs(p1[40] - 2.0 / std::sqrt(5.0)) < 1e-2);
  for (std::size_t i = 12; i < p1.size(); ++i) CHECK(p1[i] <= p1[i - 1] + 1e-9);
}

TEST_CASE("noiseless_q") {
  CHECK(noiseless_q(0.2, 0.0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(std::abs(noiseless_q(0.5, 30.0) - 1.0) < 1e-12);
  for (double a : {0.2, 0.8})
    for (double tau : {0.5, 1.0, 2.0, 3.0}) CHECK(std::abs(bar_q(sp(1e8, a), tau) - noiseless_q(a, tau)) < 1e-3);
}

TEST_CASE("asymptote dispatch") {
  CHECK(asymptote(sp(0.5, 0.1), 10.0).regime == Regime::sub_critical);
  CHECK(asymptote(sp(1.0, 0.1), 10.0).regime == Regime::critical);
  CHECK(asymptote(sp(2.0, 0.1), 10.0).regime == Regime::super_critical);
  CHECK_FALSE(asymptote(sp(0.5, 0.1), 10.0).diagnostics.has_value());
  CHECK(asymptote(sp(2.0, 0.1), 10.0).diagnostics.has_value());
  CHECK(asymptote(sp(1.0, 0.5), 8.0).predicted == doctest::Approx(std::pow(2.0 / (std::numbers::pi * 8.0), 0.25)));
  CHECK(asymptote(sp(2.0, -0.1), 1e4).predicted == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("super-critical diagnostics approach one") {
  auto ratio = [](double tau) {
    auto d = *asymptote(sp(2.0, 0.1), tau).diagnostics;
    return d.phi / d.A;
  };
  double r30 = ratio(30.0), r100 = ratio(100.0), r300 = ratio(300.0), r1000 = ratio(1000.0);
  MESSAGE("phi/A at tau 30/100/300/1000: " << r30 << " " << r100 << " " << r300 << " " << r1000);
  CHECK(r30 < r100);
  CHECK(r100 < r300);
  CHECK(std::abs(r1000 - 1.0) < 0.05);
  auto d = *asymptote(sp(2.0, 0.1), 100.0).diagnostics;
  CHECK(std::isfinite(d.psi));
  CHECK(d.psi / d.phi == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("sub-critical asymptote approaches one") {
  auto ratio = [](double tau) { return bar_q(sp(0.5, 0.1), tau) / asymptote_value(0.5, 0.1, tau); };
  double r60 = ratio(60.0), r200 = ratio(200.0), r1000 = ratio(1000.0);
  MESSAGE("bar_q/asymptote at tau 60/200/1000: " << r60 << " " << r200 << " " << r1000);
  CHECK(r60 < r200);
  CHECK(std::abs(r200 - 1.0) < 0.1);
  CHECK(std::abs(r1000 - 1.0) < 0.02);
}

TEST_CASE("critical law as an upper bound (reported)") {
  int violations = 0;
  for (int i = 0; i < 50; ++i) {
    double tau = 1.0 + i;
    if (bar_q(sp(1.0, 0.5), tau) > asymptote(sp(1.0, 0.5), tau).predicted) ++violations;
  }
  MESSAGE("critical-law upper bound violations on [1, 50]: " << violations);
}

TEST_CASE("k_lambda") {
  CHECK(std::abs(k_lambda(2.0) - 2.0) < 1e-6);
  CHECK(std::abs(k_lambda(10.0) - 10.0 / 9.0) < 1e-6);
  CHECK(std::abs(k_lambda(1.05) - 21.0) < 1e-4);
  // tensor rule over the truncated quadrant
  const double lam = 10.0, T = 90.0;
  auto rule = spikedyn::composite_gauss_legendre([&] {
    std::vector<double> b;
    for (int k = 0; k <= 45; ++k) b.push_back(T * k / 45);
    return b;
  }(), 16);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      double x = rule.nodes[i] + rule.nodes[j];
      s += rule.weights[i] * rule.weights[j] * std::exp(-kappa(lam) * x) * m_lambda_scaled(lam, x);
    }
  CHECK(std::abs(k_lambda(lam) - s) < 1e-7);
  CHECK_THROWS_AS(k_lambda(1.0), Error);
  CHECK_THROWS_AS(k_lambda(0.5), Error);
}

TEST_CASE("Laplace identity") {
  const double lam = 2.0, a = 0.2, p = 3.0, c = 1.0 + 1.0 / lam;
  double lhs = oracle::gl_panels([&](double t) { return std::exp(-(p - c) * t) * hat_q_scaled(sp(lam, a), t); }, 0.0,
                                 60.0, 30, 24);
  double rhs = a * (1.0 + g_sc(Complex(p * std::sqrt(lam), 0.0)).real() / std::sqrt(lam)) / (p - c);
  CHECK(std::abs(lhs - rhs) < 1e-6);
}

TEST_CASE("overflow safety at tau 1e4") {
  for (double lam : {0.1, 0.5, 1.0, 2.0, 10.0, 1e12}) {
    auto p = sp(lam, 0.3);
    INFO("lambda " << lam);
    double q = bar_q(p, 1e4);
    CHECK(std::isfinite(q));
    CHECK(std::abs(q) <= 1.0);
    CHECK(std::isfinite(hat_q_scaled(p, 1e4)));
    CHECK(std::isfinite(hat_p_scaled(p, 1e4)));
    auto c = cost_and_p1(p, 1e4);
    CHECK(std::isfinite(c.cost));
    CHECK(std::isfinite(c.p1_bar));
    auto d = scaled_dynamics(p, 1e4);
    CHECK(std::isfinite(d.F_rate));
  }
}

TEST_CASE("scaled dynamics invariants") {
  for (double lam : {0.5, 1.0, 3.0})
    for (double tau : {0.0, 0.5, 4.0}) {
      auto d = scaled_dynamics(sp(lam, 0.4), tau);
      CHECK(d.h > 0.0);
      CHECK(std::abs(d.g / std::sqrt(d.h)) <= 1.0);
    }
  auto d0 = scaled_dynamics(sp(3.0, 0.4), 0.0);
  CHECK(d0.g == 0.4);
  CHECK(d0.h == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("monotone approach above the transition") {
  const double lim = std::sqrt(0.5);
  auto check = [&](double alpha, std::vector<double> taus) {
    double prev = 1.0;
    for (double t : taus) {
      double dev = std::abs(bar_q(sp(2.0, alpha), t) - lim);
      CHECK(dev < prev);
      prev = dev;
    }
  };
  check(0.5, {20, 25, 30, 40, 50, 60, 80});
  // at alpha = 0.1 the curve crosses the limit near tau = 20 before settling
  check(0.1, {25, 30, 40, 50, 60, 80});
}

TEST_CASE("theory_curve") {
  ScenarioParams p{2.0, 0.1, {}};
  for (int i = 0; i <= 30; ++i) p.tau_grid.push_back(0.25 * i);
  auto serial = theory_curve(p);
  ThreadPool pool(3);
  auto par = theory_curve(p, &pool);
  REQUIRE(serial.tau.size() == 31);
  CHECK(serial.q_bar == par.q_bar);
  CHECK(serial.cost == par.cost);
  CHECK(serial.p1_bar == par.p1_bar);
  CHECK(serial.q_bar[0] == 0.1);
  CHECK(serial.cost[0] == doctest::Approx(1.0 - 0.01 - serial.p1_bar[0] / std::sqrt(2.0)));
  for (std::size_t i = 0; i < serial.tau.size(); ++i) {
    CHECK(serial.q_bar[i] == bar_q(p, serial.tau[i]));
    CHECK(std::abs(serial.q_bar[i]) <= 1.0);
  }
}
