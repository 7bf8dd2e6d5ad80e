// SPDX-License-Identifier: Apache-2.0
#include "spikedyn/landscape.hpp"

#include <algorithm>
#include <cmath>

#include "spikedyn/error.hpp"

namespace spikedyn {

LandscapeReport landscape_check(const NoiseInstance& noise, double lambda, const Eigen::VectorXd& theta_star) {
  const int n = noise.n;
  require(n >= 2 && n <= 400, "landscape_check: n must lie in [2, 400]");
  require(lambda > 0.0, "landscape_check: lambda must be positive");
  require(theta_star.size() == n, "landscape_check: theta* dimension mismatch");
  const double dn = double(n);
  Eigen::MatrixXd A = noise.matrix + (std::sqrt(lambda) / dn) * theta_star * theta_star.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success) fail(ErrorCode::numerical, "landscape: eigendecomposition failed");
  const Eigen::VectorXd& a = es.eigenvalues();

  LandscapeReport rep;
  rep.eigenvalues = a;
  double gap = INFINITY;
  for (int i = 1; i < n; ++i) gap = std::min(gap, a[i] - a[i - 1]);
  rep.degenerate = gap < 1e-10;

  const double scale = std::sqrt(dn);
  Eigen::VectorXd top = es.eigenvectors().col(n - 1) * scale;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd v = es.eigenvectors().col(i) * scale;
    Eigen::VectorXd Av = A * v;
    // covariant gradient of -<v, A v>/(2n) on the sphere
    Eigen::VectorXd grad = (v.dot(Av) / dn) * v - Av;
    rep.max_gradient_residual = std::max(rep.max_gradient_residual, grad.norm() / scale);
    rep.overlaps.push_back(std::abs(theta_star.dot(v)) / dn);
    if (i < n - 1) {
      // the top eigenvector is tangent at v and carries curvature a_i - a_top
      Eigen::VectorXd d = top - (top.dot(v) / dn) * v;
      double c = d.norm() > 0.0 ? (d.dot(a[i] * d - A * d)) / d.squaredNorm() : 0.0;
      rep.curvature.push_back(c);
      if (c < -1e-8) ++rep.saddle_count;
    }
  }

  // full projected Hessian at the top eigenvector
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) - (top * top.transpose()) / dn;
  Eigen::MatrixXd Hs = P * (a[n - 1] * Eigen::MatrixXd::Identity(n, n) - A) * P;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> hs(Hs, Eigen::EigenvaluesOnly);
  rep.top_min_hessian_eig = hs.eigenvalues().minCoeff();
  rep.curvature.push_back(rep.top_min_hessian_eig);
  rep.top_is_minimum = rep.top_min_hessian_eig >= -1e-8;
  rep.top_overlap = rep.overlaps.back();
  return rep;
}

}  // namespace spikedyn
