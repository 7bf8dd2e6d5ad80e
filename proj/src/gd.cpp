// SPDX-License-Identifier: Apache-2.0
#include "spikedyn/gd.hpp"

#include <algorithm>
#include <cmath>

#include "spikedyn/error.hpp"
#include "spikedyn/parallel.hpp"
#include "spikedyn/rng.hpp"
#include "spikedyn/stats.hpp"

namespace spikedyn {

void SimConfig::validate() const {
  require(n >= 2, "n must be at least 2");
  require(std::isfinite(lambda) && lambda > 0.0, "lambda must be positive");
  require(std::isfinite(alpha) && std::abs(alpha) <= 1.0, "alpha must lie in [-1, 1]");
  require(std::isfinite(dt) && dt > 0.0, "dt must be positive");
  require(steps >= 1, "steps must be positive");
  require(runs >= 1, "runs must be positive");
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> init_vectors(int n, double alpha) {
  require(n >= 2, "init_vectors: n must be at least 2");
  require(std::abs(alpha) <= 1.0, "init_vectors: alpha must lie in [-1, 1]");
  const double s = std::sqrt(double(n));
  Eigen::VectorXd theta0 = Eigen::VectorXd::Zero(n), star = Eigen::VectorXd::Zero(n);
  star[0] = s;
  theta0[0] = alpha * s;
  theta0[1] = std::sqrt(1.0 - alpha * alpha) * s;
  return {theta0, star};
}

Eigen::VectorXd gd_step(const Eigen::VectorXd& theta, const YAction& Y_apply, int n, double dt) {
  Eigen::VectorXd t = theta + (dt / double(n)) * Y_apply(theta);
  double norm = t.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) fail(ErrorCode::numerical, "gd_step: iterate collapsed to zero");
  return (std::sqrt(double(n)) / norm) * t;
}

double spherical_cost(double q, double p1, double h_star, double lambda) {
  const double isl = 1.0 / std::sqrt(lambda);
  return (1.0 + h_star * isl) - (q * q + p1 * isl);
}

RunTrace simulate_with_noise(const SimConfig& cfg, const Eigen::MatrixXd& H) {
  cfg.validate();
  const int n = cfg.n;
  const double dn = double(n), isl = 1.0 / std::sqrt(cfg.lambda);
  auto [theta, star] = init_vectors(n, cfg.alpha);
  const double h_star = star.dot(H * star) / dn;

  RunTrace tr;
  tr.tau.reserve(cfg.steps + 1);
  for (int k = 0; k <= cfg.steps; ++k) {
    Eigen::VectorXd Ht = H * theta;
    double q = star.dot(theta) / dn;
    double p1 = theta.dot(Ht) / dn;
    tr.tau.push_back(k * cfg.dt);
    tr.q.push_back(q);
    tr.p1.push_back(p1);
    tr.cost.push_back(spherical_cost(q, p1, h_star, cfg.lambda));
    tr.mse.push_back((theta - star).squaredNorm() / dn);
    tr.norm_drift = std::max(tr.norm_drift, std::abs(theta.squaredNorm() / dn - 1.0));
    if (!std::isfinite(q) || !std::isfinite(p1)) fail(ErrorCode::numerical, "simulation produced non-finite values");
    if (k == cfg.steps) break;
    // Y theta / n = q theta* + H theta / sqrt(lambda), reusing H theta
    theta = gd_step(theta, [&](const Eigen::VectorXd&) -> Eigen::VectorXd { return dn * (q * star + isl * Ht); },
                    n, cfg.dt);
  }
  return tr;
}

RunTrace simulate_run(const SimConfig& cfg, int run_index) {
  cfg.validate();
  NoiseInstance H = sample_wigner(cfg.n, cfg.ensemble, splitmix64(cfg.base_seed ^ splitmix64(run_index + 1)));
  return simulate_with_noise(cfg, H.matrix);
}

EnsembleStats ensemble(const SimConfig& cfg, ThreadPool* pool) {
  cfg.validate();
  require(cfg.runs >= 2, "ensemble needs at least two runs");
  std::vector<RunTrace> runs(cfg.runs);
  parallel_for(pool, runs.size(), [&](std::size_t r) { runs[r] = simulate_run(cfg, int(r)); });
  EnsembleStats st;
  st.tau = runs.front().tau;
  const std::size_t m = st.tau.size();
  for (auto* qs : {&st.q, &st.cost, &st.p1})
    for (auto& v : *qs) v.resize(m);
  std::vector<double> buf(runs.size());
  auto fill = [&](Quantiles& out, std::vector<double> RunTrace::*field) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t r = 0; r < runs.size(); ++r) buf[r] = (runs[r].*field)[i];
      out[0][i] = quantile(buf, 0.1);
      out[1][i] = quantile(buf, 0.5);
      out[2][i] = quantile(buf, 0.9);
    }
  };
  fill(st.q, &RunTrace::q);
  fill(st.cost, &RunTrace::cost);
  fill(st.p1, &RunTrace::p1);
  for (const auto& r : runs) st.max_norm_drift = std::max(st.max_norm_drift, r.norm_drift);
  return st;
}

}  // namespace spikedyn
