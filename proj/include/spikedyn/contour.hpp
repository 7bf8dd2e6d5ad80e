// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "spikedyn/semicircle.hpp"

namespace spikedyn {

struct ContourGrid {
  double radius = 2.5;
  double margin = 0.4;
  int num_points = 256;
  std::vector<Complex> points;

  static ContourGrid make(double radius = 2.5, double margin = 0.4, int num_points = 256);
  // index of the conjugate partner of point j
  int conjugate_index(int j) const { return j == 0 ? 0 : num_points - j; }
};

struct ContourValue {
  double value = 0.0;
  double imag_residue = 0.0;
  bool flagged = false;  // |imag residue| > 1e-8
};

// -1/(2 pi i) * contour integral of z^k v(z) dz by the trapezoid rule on the circle
ContourValue contour_integral(const std::vector<Complex>& values, const ContourGrid& grid, int k);

}  // namespace spikedyn
