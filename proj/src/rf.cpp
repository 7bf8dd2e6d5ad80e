// SPDX-License-Identifier: Apache-2.0
#include "spikedyn/rf.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "spikedyn/error.hpp"
#include "spikedyn/parallel.hpp"
#include "spikedyn/rng.hpp"

namespace spikedyn {

int RFConfig::N() const { return int(std::ceil(psi1 * d - 1e-9)); }
int RFConfig::n() const { return int(std::ceil(psi2 * d - 1e-9)); }

void RFConfig::validate() const {
  require(d >= 4, "rf: d must be at least 4");
  require(std::isfinite(psi1) && psi1 > 0.0, "rf: psi1 must be positive");
  require(std::isfinite(psi2) && psi2 > 0.0, "rf: psi2 must be positive");
  require(std::isfinite(lambda) && lambda >= 0.0, "rf: ridge lambda must be non-negative");
  require(N() >= 1 && n() >= 1, "rf: N and n must be positive");
}

namespace {

Eigen::MatrixXd sphere_rows(int rows, int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd M(rows, d);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < d; ++j) M(i, j) = normal(rng);
    M.row(i) *= std::sqrt(double(d)) / M.row(i).norm();
  }
  return M;
}

double activate(Activation a, double u) {
  switch (a) {
    case Activation::relu: return u > 0.0 ? u : 0.0;
    case Activation::tanh: return std::tanh(u);
    case Activation::identity: return u;
  }
  return u;
}

// (1 - e^{-t u}) / u with the u -> 0 limit
double flow_factor(double u, double t) {
  if (std::abs(u) < 1e-12) return t;
  return -std::expm1(-t * u) / u;
}

void check_spectrum(const std::vector<double>& mu, const std::vector<double>& w, double lambda_star) {
  for (std::size_t i = 0; i < mu.size(); ++i) {
    double u = mu[i] + lambda_star;
    if (u < -1e-12 && w[i] != 0.0) fail(ErrorCode::singular, "rf: mu_i + lambda* is negative");
  }
}

}  // namespace

std::pair<RFInstance, RFSpectralMeasures> build_instance(const RFConfig& cfg) {
  cfg.validate();
  RFInstance in;
  in.d = cfg.d;
  in.N = cfg.N();
  in.n = cfg.n();
  in.lambda = cfg.lambda;
  const double d = double(in.d);
  in.psi1 = in.N / d;
  in.psi2 = in.n / d;
  in.lambda_star = cfg.lambda * in.N * double(in.n) / (d * d);

  auto rx = make_stream(cfg.seed, {1});
  auto rt = make_stream(cfg.seed, {2});
  auto rb = make_stream(cfg.seed, {3});
  auto re = make_stream(cfg.seed, {4});
  in.X = sphere_rows(in.n, in.d, rx);
  in.Theta = sphere_rows(in.N, in.d, rt);
  in.beta = sphere_rows(1, in.d, rb).row(0).transpose() / std::sqrt(d);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd eps(in.n);
  for (int i = 0; i < in.n; ++i) eps[i] = normal(re);
  in.Y_signal = in.X * in.beta;
  in.Y = in.Y_signal + eps;

  in.Z = (in.X * in.Theta.transpose()) / std::sqrt(d);
  if (cfg.activation != Activation::identity)
    in.Z = in.Z.unaryExpr([&](double u) { return activate(cfg.activation, u); });
  if (!in.Z.allFinite()) fail(ErrorCode::numerical, "rf: non-finite feature matrix");
  in.H = (in.Z.transpose() * in.Z) / d;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(in.H);
  if (es.info() != Eigen::Success) fail(ErrorCode::numerical, "rf: eigendecomposition failed");
  in.eigvals = es.eigenvalues();
  in.eigvecs = es.eigenvectors();
  in.b = in.Z.transpose() * in.Y / d;
  in.b_eig = in.eigvecs.transpose() * in.b;
  in.C_Y = in.Y.squaredNorm() / (2.0 * in.n);

  RFSpectralMeasures m;
  m.support.assign(in.eigvals.data(), in.eigvals.data() + in.N);
  m.p0_mass.assign(in.N, 1.0);
  Eigen::VectorXd bs = in.eigvecs.transpose() * (in.Z.transpose() * in.Y_signal / d);
  // (Z^T/d)(X X^T/d)(Z/d) seen through each eigenvector
  Eigen::MatrixXd XtZV = in.X.transpose() * (in.Z * in.eigvecs) / d;
  for (int i = 0; i < in.N; ++i) {
    m.r_instance.push_back(in.b_eig[i] * in.b_eig[i]);
    m.r_signal.push_back(bs[i] * bs[i]);
    m.r_beta.push_back(XtZV.col(i).squaredNorm() / d);
  }
  return {std::move(in), std::move(m)};
}

RFCurve rf_risk_curve(const RFInstance& inst, const RFSpectralMeasures& meas, double lambda_star,
                      const std::vector<double>& t_grid, RWeights weights) {
  require(lambda_star >= 0.0, "rf: lambda* must be non-negative");
  const std::vector<double>& w = weights == RWeights::instance
                                     ? meas.r_instance
                                     : (weights == RWeights::beta_averaged ? meas.r_beta : meas.r_signal);
  const auto& mu = meas.support;
  check_spectrum(mu, w, lambda_star);
  RFCurve c;
  c.t = t_grid;
  for (double t : t_grid) {
    double q0 = 0.0, p0 = 0.0, p1 = 0.0, decay = 0.0, gain = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      double u = mu[i] + lambda_star;
      double f = flow_factor(u, t);
      double e2 = std::exp(-2.0 * t * u);
      q0 += w[i] * f;
      p0 += meas.p0_mass[i] * e2 + w[i] * f * f;
      p1 += mu[i] * (meas.p0_mass[i] * e2 + w[i] * f * f);
      decay += meas.p0_mass[i] * u * e2;
      gain += w[i] * flow_factor(u, 2.0 * t);
    }
    c.q0.push_back(q0);
    c.p0.push_back(p0);
    c.p1.push_back(p1);
    c.risk.push_back(inst.C_Y + (decay - gain) / (2.0 * inst.psi2));
    c.risk_combination.push_back(inst.C_Y - (q0 - 0.5 * (p1 + lambda_star * p0)) / inst.psi2);
  }
  return c;
}

RFFlow rf_flow_exact(const RFInstance& inst, double lambda_star, const Eigen::VectorXd& a0, double t) {
  require(a0.size() == inst.N, "rf: a0 dimension mismatch");
  require(t >= 0.0, "rf: t must be non-negative");
  Eigen::VectorXd c0 = inst.eigvecs.transpose() * a0;
  Eigen::VectorXd ct(inst.N);
  for (int i = 0; i < inst.N; ++i) {
    double u = inst.eigvals[i] + lambda_star;
    ct[i] = std::exp(-t * u) * c0[i] + flow_factor(u, t) * inst.b_eig[i];
  }
  RFFlow out;
  out.a = t == 0.0 ? a0 : Eigen::VectorXd(inst.eigvecs * ct);
  double q0 = inst.b.dot(out.a), p0 = out.a.squaredNorm(), p1 = out.a.dot(inst.H * out.a);
  out.risk = inst.C_Y - (q0 - 0.5 * (p1 + lambda_star * p0)) / inst.psi2;
  return out;
}

double rf_risk_direct(const RFInstance& inst, const Eigen::VectorXd& a) {
  return (inst.Y - inst.Z * a).squaredNorm() / (2.0 * inst.n) +
         inst.lambda * inst.N / (2.0 * inst.d) * a.squaredNorm();
}

Eigen::VectorXd rf_ridge_solution(const RFInstance& inst) {
  Eigen::MatrixXd A = inst.Z.transpose() * inst.Z;
  A.diagonal().array() += double(inst.n) * inst.N / inst.d * inst.lambda;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  return lu.solve(inst.Z.transpose() * inst.Y);
}

double rf_expectation_identity(const RFInstance& inst, const RFSpectralMeasures& meas, double lambda_star,
                               const std::vector<double>& t_grid) {
  RFCurve c = rf_risk_curve(inst, meas, lambda_star, t_grid, RWeights::instance);
  double err = 0.0;
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    double t = t_grid[k];
    // E a_t = m(t) since E a0 = 0; E a0 a0^T = I gives the trace terms
    Eigen::VectorXd f(inst.N);
    double tr0 = 0.0, tr1 = 0.0;
    for (int i = 0; i < inst.N; ++i) {
      double u = inst.eigvals[i] + lambda_star;
      f[i] = flow_factor(u, t) * inst.b_eig[i];
      double e2 = std::exp(-2.0 * t * u);
      tr0 += e2;
      tr1 += inst.eigvals[i] * e2;
    }
    Eigen::VectorXd m = inst.eigvecs * f;
    double q0 = inst.b.dot(m);
    double p0 = m.squaredNorm() + tr0;
    double p1 = m.dot(inst.H * m) + tr1;
    double risk = inst.C_Y - (q0 - 0.5 * (p1 + lambda_star * p0)) / inst.psi2;
    err = std::max({err, std::abs(q0 - c.q0[k]), std::abs(p0 - c.p0[k]), std::abs(p1 - c.p1[k]),
                    std::abs(risk - c.risk[k])});
  }
  return err;
}

RFMonteCarlo rf_flow_mc(const RFInstance& inst, double lambda_star, const std::vector<double>& t_grid,
                        int num_draws, std::uint64_t seed, ThreadPool* pool) {
  require(num_draws >= 2, "rf_flow_mc: need at least two draws");
  std::vector<std::vector<double>> risks(num_draws, std::vector<double>(t_grid.size()));
  parallel_for(pool, std::size_t(num_draws), [&](std::size_t k) {
    auto rng = make_stream(seed, {0x5f, k});
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd a0(inst.N);
    for (int i = 0; i < inst.N; ++i) a0[i] = normal(rng);
    a0 *= std::sqrt(double(inst.N)) / a0.norm();
    for (std::size_t j = 0; j < t_grid.size(); ++j) risks[k][j] = rf_flow_exact(inst, lambda_star, a0, t_grid[j]).risk;
  });
  RFMonteCarlo mc;
  mc.t = t_grid;
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    double mean = 0.0;
    for (int k = 0; k < num_draws; ++k) mean += risks[k][j];
    mean /= num_draws;
    double var = 0.0;
    for (int k = 0; k < num_draws; ++k) var += (risks[k][j] - mean) * (risks[k][j] - mean);
    var /= (num_draws - 1);
    mc.mean.push_back(mean);
    mc.stderr_.push_back(std::sqrt(var / num_draws));
  }
  for (int k = 0; k < num_draws; ++k) mc.risk0_samples.push_back(risks[k].empty() ? 0.0 : risks[k][0]);
  return mc;
}

double rf_measure_discrepancy(const RFInstance& inst, const RFSpectralMeasures& meas, double lambda_star,
                              const std::vector<double>& t_grid) {
  RFCurve a = rf_risk_curve(inst, meas, lambda_star, t_grid, RWeights::beta_averaged);
  RFCurve b = rf_risk_curve(inst, meas, lambda_star, t_grid, RWeights::signal);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    num = std::max(num, std::abs(a.q0[k] - b.q0[k]));
    den = std::max(den, std::abs(a.q0[k]));
  }
  return den > 0.0 ? num / den : num;
}

double stieltjes_inversion_mass(const std::vector<double>& support, const std::vector<double>& mass, double eps) {
  require(eps > 0.0 && !support.empty(), "stieltjes inversion: need eps > 0 and a non-empty measure");
  double lo = *std::min_element(support.begin(), support.end()) - 200.0 * eps - 1.0;
  double hi = *std::max_element(support.begin(), support.end()) + 200.0 * eps + 1.0;
  const double h = eps / 8.0;
  const long steps = long(std::ceil((hi - lo) / h));
  double total = 0.0;
  for (long s = 0; s <= steps; ++s) {
    double u = lo + (hi - lo) * double(s) / double(steps);
    std::complex<double> z(u, eps);
    std::complex<double> g = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) g += mass[i] / (support[i] - z);
    double wgt = (s == 0 || s == steps) ? 0.5 : 1.0;
    total += wgt * g.imag() / std::numbers::pi;
  }
  return total * (hi - lo) / double(steps);
}

}  // namespace spikedyn
