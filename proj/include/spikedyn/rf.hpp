// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace spikedyn {

class ThreadPool;

enum class Activation { relu, tanh, identity };

struct RFConfig {
  int d = 100;
  double psi1 = 1.0;
  double psi2 = 1.5;
  double lambda = 0.1;
  Activation activation = Activation::tanh;
  std::uint64_t seed = 1;

  int N() const;  // ceil(psi1 d)
  int n() const;  // ceil(psi2 d)
  void validate() const;
};

struct RFInstance {
  int d = 0, N = 0, n = 0;
  double lambda = 0.0;
  double psi1 = 0.0, psi2 = 0.0;  // N/d and n/d as realized
  double lambda_star = 0.0;       // lambda N n / d^2
  Eigen::MatrixXd X, Theta, Z, H;
  Eigen::VectorXd Y, Y_signal, beta;
  Eigen::VectorXd eigvals;
  Eigen::MatrixXd eigvecs;  // columns orthonormal
  Eigen::VectorXd b;        // Z^T Y / d
  Eigen::VectorXd b_eig;    // b in the eigenbasis
  double C_Y = 0.0;
};

struct RFSpectralMeasures {
  std::vector<double> support;       // eigenvalues mu_i
  std::vector<double> p0_mass;       // all ones
  std::vector<double> r_beta;        // beta-averaged weights
  std::vector<double> r_instance;    // <v_i, Z^T Y / d>^2
  std::vector<double> r_signal;      // <v_i, Z^T X beta / d>^2
};

enum class RWeights { instance, beta_averaged, signal };

struct RFCurve {
  std::vector<double> t, q0, p0, p1, risk;
  std::vector<double> risk_combination;  // C_Y - (q0 - (p1 + lambda* p0)/2)/psi2
};

struct RFFlow {
  Eigen::VectorXd a;
  double risk = 0.0;
};

struct RFMonteCarlo {
  std::vector<double> t, mean, stderr_;
  std::vector<double> risk0_samples;
};

std::pair<RFInstance, RFSpectralMeasures> build_instance(const RFConfig& config);
RFCurve rf_risk_curve(const RFInstance& inst, const RFSpectralMeasures& measures, double lambda_star,
                      const std::vector<double>& t_grid, RWeights weights = RWeights::instance);
RFFlow rf_flow_exact(const RFInstance& inst, double lambda_star, const Eigen::VectorXd& a0, double t);
// ||Y - Z a||^2/(2n) + lambda N/(2d) ||a||^2 straight from the definition
double rf_risk_direct(const RFInstance& inst, const Eigen::VectorXd& a);
// minimizer of rf_risk_direct by a direct linear solve
Eigen::VectorXd rf_ridge_solution(const RFInstance& inst);
double rf_expectation_identity(const RFInstance& inst, const RFSpectralMeasures& measures, double lambda_star,
                               const std::vector<double>& t_grid);
RFMonteCarlo rf_flow_mc(const RFInstance& inst, double lambda_star, const std::vector<double>& t_grid,
                        int num_draws, std::uint64_t seed, ThreadPool* pool = nullptr);
// max_t |q0 with beta-averaged weights - q0 with signal weights| / max_t q0 (beta-averaged)
double rf_measure_discrepancy(const RFInstance& inst, const RFSpectralMeasures& measures, double lambda_star,
                              const std::vector<double>& t_grid);
// total mass recovered by inverting the Stieltjes transform of a point measure at height eps
double stieltjes_inversion_mass(const std::vector<double>& support, const std::vector<double>& mass, double eps);

}  // namespace spikedyn
