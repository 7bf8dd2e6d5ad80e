// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "spikedyn/contour.hpp"

namespace spikedyn {

class ThreadPool;

enum class Ensemble { gaussian_goe, rademacher };

struct NoiseInstance {
  int n = 0;
  Ensemble ensemble = Ensemble::gaussian_goe;
  std::uint64_t seed = 0;
  Eigen::MatrixXd matrix;  // H = xi / sqrt(n)
};

struct ResolventProbe {
  Eigen::VectorXd u, v;
  Complex z;
};

enum class PairKind { uv_equal, uv_orthogonal };

struct ConcentrationReport {
  std::vector<int> n_values;
  std::vector<std::vector<double>> sup_errors;  // [n index][trial]
  std::vector<std::array<double, 3>> quantiles;  // p10, p50, p90
};

NoiseInstance sample_wigner(int n, Ensemble ensemble, std::uint64_t seed);
NoiseInstance zero_noise(int n);
Eigen::VectorXd eigenvalues(const NoiseInstance& noise);
bool spectrum_in_interval(const NoiseInstance& noise, double delta);
// Kolmogorov-Smirnov distance between the empirical spectrum and the semicircle law
double ks_distance_semicircle(const Eigen::VectorXd& eigs);
Complex resolvent_element(const NoiseInstance& noise, const ResolventProbe& probe);
ConcentrationReport concentration_sweep(const std::vector<int>& n_values, int trials, const ContourGrid& contour,
                                        PairKind pair_kind, Ensemble ensemble = Ensemble::gaussian_goe,
                                        std::uint64_t seed = 1, ThreadPool* pool = nullptr);

}  // namespace spikedyn
