// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "spikedyn/matrix_lab.hpp"

namespace spikedyn {

class ThreadPool;

struct SimConfig {
  int n = 1000;
  double lambda = 2.0;
  double alpha = 0.1;
  double dt = 0.1;
  int steps = 100;
  int runs = 100;
  Ensemble ensemble = Ensemble::gaussian_goe;
  std::uint64_t base_seed = 1;

  double tau_max() const { return dt * steps; }
  void validate() const;
};

struct RunTrace {
  std::vector<double> tau, q, p1, cost;
  std::vector<double> mse;  // |theta - theta*|^2 / n
  double norm_drift = 0.0;
};

using Quantiles = std::array<std::vector<double>, 3>;  // p10, p50, p90

struct EnsembleStats {
  std::vector<double> tau;
  Quantiles q, cost, p1;
  double max_norm_drift = 0.0;
};

using YAction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

std::pair<Eigen::VectorXd, Eigen::VectorXd> init_vectors(int n, double alpha);
// (1 + h_star/sqrt(lambda)) - (q^2 + p1/sqrt(lambda)) with h_star = <theta*, H theta*>/n
double spherical_cost(double q, double p1, double h_star, double lambda);

// theta + (dt/n) Y theta, rescaled onto the sphere of radius sqrt(n)
Eigen::VectorXd gd_step(const Eigen::VectorXd& theta, const YAction& Y_apply, int n, double dt);
RunTrace simulate_run(const SimConfig& config, int run_index);
// Same dynamics for a given noise matrix.
RunTrace simulate_with_noise(const SimConfig& config, const Eigen::MatrixXd& H);
EnsembleStats ensemble(const SimConfig& config, ThreadPool* pool = nullptr);

}  // namespace spikedyn
