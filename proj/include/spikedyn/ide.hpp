// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "spikedyn/contour.hpp"
#include "spikedyn/theory.hpp"

namespace spikedyn {

struct IDEState {
  std::vector<Complex> Q, P, R;
  double q = 0.0;
  double p1 = 0.0;
  double tau = 0.0;
};

struct StationaryBranch {
  double q_inf = 0.0;
  double p1_lo = 0.0;  // p1_lo == p1_hi for a point value
  double p1_hi = 0.0;
  bool attainable = false;
  std::string condition;
};

IDEState init_state(const ScenarioParams& params, const ContourGrid& grid);
// States at every point of params.tau_grid that is <= tau_max.
std::vector<IDEState> solve_ide(const ScenarioParams& params, const ContourGrid& grid, double tau_max,
                                double dt);
std::vector<StationaryBranch> stationary_solutions(double lambda);

struct StationaryResidual {
  double equation = 0.0;     // pointwise residual of the stationary equations
  double q_mismatch = 0.0;   // q_inf vs -contour integral of Q_inf
  double p1_mismatch = 0.0;  // p1_inf vs -contour integral of z P_inf
};

// Checks one branch at a representative p1 value on the given grid.
StationaryResidual stationary_residual(const StationaryBranch& branch, double lambda, double p1,
                                       const ContourGrid& grid);

}  // namespace spikedyn
