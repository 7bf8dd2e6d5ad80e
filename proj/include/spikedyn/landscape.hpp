// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "spikedyn/matrix_lab.hpp"

namespace spikedyn {

struct LandscapeReport {
  Eigen::VectorXd eigenvalues;       // of A, ascending
  std::vector<double> overlaps;      // |<theta*, v_i>| / n with v_i on the sphere of radius sqrt(n)
  std::vector<double> curvature;     // most negative tangent curvature found at v_i
  double top_overlap = 0.0;
  double max_gradient_residual = 0.0;
  double top_min_hessian_eig = 0.0;
  int saddle_count = 0;
  bool top_is_minimum = false;
  bool degenerate = false;  // smallest eigenvalue gap below 1e-10
};

// Critical points of the spherical cost for A = (sqrt(lambda)/n) theta* theta*^T + H.
LandscapeReport landscape_check(const NoiseInstance& noise, double lambda, const Eigen::VectorXd& theta_star);

}  // namespace spikedyn
