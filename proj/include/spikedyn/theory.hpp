// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

namespace spikedyn {

class ThreadPool;

struct ScenarioParams {
  double lambda = 1.0;
  double alpha = 0.0;
  std::vector<double> tau_grid;

  void validate() const;
};

// Public scaling: g = e^{-(1+1/lambda)tau} q_hat, h = e^{-2(1+1/lambda)tau} p_hat.
struct ScaledDynamics {
  double g = 0.0;
  double h = 1.0;
  double F_rate = 0.0;  // q_bar^2 + p1_bar/sqrt(lambda)
};

// Internal scaling with rate r = 1+1/lambda (lambda >= 1) or 2/sqrt(lambda) (lambda < 1);
// q = e^{-r tau} q_hat and p = e^{-2 r tau} p_hat stay finite for all tau.
struct RateScaled {
  double rate = 0.0;
  double q = 0.0;
  double p = 1.0;
};

struct TheoryCurve {
  std::vector<double> tau, q_bar, cost, p1_bar;
  std::vector<bool> degraded;
};

struct CostP1 {
  double cost = 0.0;
  double p1_bar = 0.0;
  bool degraded = false;
};

enum class Regime { sub_critical, critical, super_critical };

struct AsymptoteDiagnostics {
  double psi = 0.0;
  double phi = 0.0;
  double A = 0.0;
};

struct AsymptoteReport {
  Regime regime = Regime::critical;
  double predicted = 0.0;
  std::optional<AsymptoteDiagnostics> diagnostics;  // super-critical only
};

double hat_q_scaled(const ScenarioParams& params, double tau);
double hat_p_scaled(const ScenarioParams& params, double tau);
RateScaled rate_scaled(const ScenarioParams& params, double tau);
ScaledDynamics scaled_dynamics(const ScenarioParams& params, double tau);
double bar_q(const ScenarioParams& params, double tau);
double bar_q_lambda1(double alpha, double tau);
CostP1 cost_and_p1(const ScenarioParams& params, double tau);
double noiseless_q(double alpha, double tau);
double asymptote_value(double lambda, double alpha, double tau);
AsymptoteReport asymptote(const ScenarioParams& params, double tau);
double k_lambda(double lambda);
// leading Watson term of q_hat for lambda < 1, in the internal scaling e^{-2tau/sqrt(lambda)}
double watson_q_rate_scaled(double lambda, double alpha, double tau);

TheoryCurve theory_curve(const ScenarioParams& params, ThreadPool* pool = nullptr);

}  // namespace spikedyn
