// SPDX-License-Identifier: Apache-2.0
#include "spikedyn/matrix_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spikedyn/error.hpp"
#include "spikedyn/parallel.hpp"
#include "spikedyn/rng.hpp"
#include "spikedyn/stats.hpp"

namespace spikedyn {

NoiseInstance sample_wigner(int n, Ensemble ensemble, std::uint64_t seed) {
  require(n >= 2, "sample_wigner: n must be at least 2");
  NoiseInstance out;
  out.n = n;
  out.ensemble = ensemble;
  out.seed = seed;
  out.matrix.resize(n, n);
  auto rng = make_stream(seed, {std::uint64_t(n), std::uint64_t(ensemble)});
  const double s = 1.0 / std::sqrt(double(n));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) {
      double x;
      if (ensemble == Ensemble::gaussian_goe) {
        x = normal(rng);
        if (i == j) x *= std::numbers::sqrt2;
      } else {
        x = coin(rng) ? 1.0 : -1.0;
        if (i == j) x *= std::numbers::sqrt2;
      }
      out.matrix(i, j) = out.matrix(j, i) = x * s;
    }
  }
  return out;
}

NoiseInstance zero_noise(int n) {
  require(n >= 2, "zero_noise: n must be at least 2");
  NoiseInstance out;
  out.n = n;
  out.matrix = Eigen::MatrixXd::Zero(n, n);
  return out;
}

Eigen::VectorXd eigenvalues(const NoiseInstance& noise) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(noise.matrix, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorCode::numerical, "eigendecomposition failed");
  return es.eigenvalues();
}

bool spectrum_in_interval(const NoiseInstance& noise, double delta) {
  require(delta > 0.0, "spectrum_in_interval: delta must be positive");
  Eigen::VectorXd ev = eigenvalues(noise);
  return ev.minCoeff() >= -2.0 - delta && ev.maxCoeff() <= 2.0 + delta;
}

double ks_distance_semicircle(const Eigen::VectorXd& eigs) {
  std::vector<double> v(eigs.data(), eigs.data() + eigs.size());
  std::sort(v.begin(), v.end());
  auto cdf = [](double s) {
    if (s <= -2.0) return 0.0;
    if (s >= 2.0) return 1.0;
    return 0.5 + s * std::sqrt(4.0 - s * s) / (4.0 * std::numbers::pi) + std::asin(0.5 * s) / std::numbers::pi;
  };
  const double n = double(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double f = cdf(v[i]);
    d = std::max({d, std::abs(f - i / n), std::abs(f - (i + 1) / n)});
  }
  return d;
}

Complex resolvent_element(const NoiseInstance& noise, const ResolventProbe& probe) {
  const int n = noise.n;
  require(probe.u.size() == n && probe.v.size() == n, "resolvent probe dimension mismatch");
  require(std::abs(probe.u.norm() - 1.0) <= 1e-12 && std::abs(probe.v.norm() - 1.0) <= 1e-12,
          "resolvent probe vectors must be unit vectors");
  if (std::abs(probe.z.imag()) < 1e-12) {
    Eigen::VectorXd ev = eigenvalues(noise);
    double gap = (ev.array() - probe.z.real()).abs().minCoeff();
    if (gap < 1e-12) fail(ErrorCode::singular, "resolvent: z is within 1e-12 of an eigenvalue");
  }
  Eigen::MatrixXcd A = noise.matrix.cast<Complex>();
  A.diagonal().array() -= probe.z;
  Eigen::VectorXcd rhs = probe.v.cast<Complex>();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  Eigen::VectorXcd x = lu.solve(rhs);
  double resid = (A * x - rhs).norm();
  if (!std::isfinite(resid) || resid > 1e-10) fail(ErrorCode::singular, "resolvent: solve residual too large");
  return probe.u.cast<Complex>().dot(x);
}

ConcentrationReport concentration_sweep(const std::vector<int>& n_values, int trials, const ContourGrid& contour,
                                        PairKind pair_kind, Ensemble ensemble, std::uint64_t seed,
                                        ThreadPool* pool) {
  require(trials >= 1, "concentration_sweep: trials must be positive");
  for (int n : n_values) require(n >= 2 && n <= 4000, "concentration_sweep: n must lie in [2, 4000]");
  ConcentrationReport rep;
  rep.n_values = n_values;
  rep.sup_errors.assign(n_values.size(), std::vector<double>(trials, 0.0));
  std::vector<Complex> gvals;
  for (Complex z : contour.points) gvals.push_back(g_sc(z));
  const double uv = pair_kind == PairKind::uv_equal ? 1.0 : 0.0;

  const std::size_t jobs = n_values.size() * std::size_t(trials);
  parallel_for(pool, jobs, [&](std::size_t job) {
    std::size_t ni = job / trials, t = job % trials;
    int n = n_values[ni];
    NoiseInstance H = sample_wigner(n, ensemble, splitmix64(seed ^ splitmix64(t + 1)));
    // H = Q T Q^T once per trial; each contour point is then a tridiagonal solve
    Eigen::Tridiagonalization<Eigen::MatrixXd> tri(H.matrix);
    const Eigen::VectorXd diag = tri.diagonal();
    const Eigen::VectorXd off = tri.subDiagonal();
    Eigen::VectorXd qu = tri.matrixQ().adjoint() * Eigen::VectorXd::Unit(n, 0);
    Eigen::VectorXd qv = pair_kind == PairKind::uv_equal
                             ? qu
                             : Eigen::VectorXd(tri.matrixQ().adjoint() * Eigen::VectorXd::Unit(n, 1));
    std::vector<Complex> c(n), x(n);
    double sup = 0.0;
    for (std::size_t j = 0; j < contour.points.size(); ++j) {
      Complex z = contour.points[j];
      // Thomas elimination; T - z is definite or has non-real pivots off the spectrum
      Complex piv = diag[0] - z;
      c[0] = 0.0;
      x[0] = qv[0] / piv;
      for (int k = 1; k < n; ++k) {
        c[k - 1] = off[k - 1] / piv;
        piv = diag[k] - z - off[k - 1] * c[k - 1];
        x[k] = (qv[k] - off[k - 1] * x[k - 1]) / piv;
      }
      for (int k = n - 2; k >= 0; --k) x[k] -= c[k] * x[k + 1];
      Complex r = 0.0;
      for (int k = 0; k < n; ++k) r += qu[k] * x[k];
      sup = std::max(sup, std::abs(r - uv * gvals[j]));
    }
    rep.sup_errors[ni][t] = sup;
  });
  for (const auto& e : rep.sup_errors) rep.quantiles.push_back({quantile(e, 0.1), quantile(e, 0.5), quantile(e, 0.9)});
  return rep;
}

}  // namespace spikedyn
