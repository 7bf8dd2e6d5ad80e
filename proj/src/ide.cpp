// SPDX-License-Identifier: Apache-2.0
#include "spikedyn/ide.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "spikedyn/error.hpp"

namespace spikedyn {

ContourGrid ContourGrid::make(double radius, double margin, int num_points) {
  require(margin > 0.0, "contour margin must be positive");
  require(radius > 2.0 + margin, "contour radius must exceed 2 + margin");
  require(num_points >= 64, "contour needs at least 64 points");
  ContourGrid g;
  g.radius = radius;
  g.margin = margin;
  g.num_points = num_points;
  g.points.resize(num_points);
  for (int j = 0; j <= num_points / 2; ++j) {
    double th = 2.0 * std::numbers::pi * j / num_points;
    g.points[j] = std::polar(radius, th);
  }
  // exact conjugate pairs
  g.points[0] = Complex(radius, 0.0);
  if (num_points % 2 == 0) g.points[num_points / 2] = Complex(-radius, 0.0);
  for (int j = num_points / 2 + 1; j < num_points; ++j) g.points[j] = std::conj(g.points[num_points - j]);
  return g;
}

ContourValue contour_integral(const std::vector<Complex>& values, const ContourGrid& grid, int k) {
  require(values.size() == grid.points.size(), "contour values must align with the grid");
  // dz = i z dtheta, so -(1/2 pi i) sum z^k v i z dtheta = -(1/M) sum z^{k+1} v
  Complex s = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    Complex z = grid.points[j];
    Complex zp = z;
    for (int m = 0; m < k; ++m) zp *= z;
    if (k < 0)
      for (int m = 0; m < -k; ++m) zp /= z;
    s += zp * values[j];
  }
  s *= -1.0 / double(values.size());
  ContourValue out;
  out.value = s.real();
  out.imag_residue = s.imag();
  out.flagged = std::abs(s.imag()) > 1e-8;
  return out;
}

IDEState init_state(const ScenarioParams& params, const ContourGrid& grid) {
  params.validate();
  IDEState st;
  const std::size_t m = grid.points.size();
  st.Q.resize(m);
  st.P.resize(m);
  st.R.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    Complex g = g_sc(grid.points[j]);
    st.R[j] = g;
    st.P[j] = g;
    st.Q[j] = params.alpha * g;
  }
  st.q = contour_integral(st.Q, grid, 0).value;
  st.p1 = contour_integral(st.P, grid, 1).value;
  st.tau = 0.0;
  return st;
}

namespace {

struct Rhs {
  const ContourGrid& grid;
  const std::vector<Complex>& R;
  double isl;

  // returns q, p1 of the input stage and fills derivatives
  std::pair<double, double> operator()(const std::vector<Complex>& Q, const std::vector<Complex>& P,
                                       std::vector<Complex>& dQ, std::vector<Complex>& dP) const {
    double q = contour_integral(Q, grid, 0).value;
    double p1 = contour_integral(P, grid, 1).value;
    double rate = q * q + p1 * isl;
    for (std::size_t j = 0; j < Q.size(); ++j) {
      Complex z = grid.points[j];
      dQ[j] = q * R[j] + (z * Q[j] + q) * isl - rate * Q[j];
      dP[j] = 2.0 * (q * Q[j] + (z * P[j] + 1.0) * isl - rate * P[j]);
    }
    return {q, p1};
  }
};

void rk4_step(const Rhs& f, std::vector<Complex>& Q, std::vector<Complex>& P, double h) {
  const std::size_t m = Q.size();
  std::vector<Complex> k1q(m), k1p(m), k2q(m), k2p(m), k3q(m), k3p(m), k4q(m), k4p(m), tq(m), tp(m);
  f(Q, P, k1q, k1p);
  for (std::size_t j = 0; j < m; ++j) {
    tq[j] = Q[j] + 0.5 * h * k1q[j];
    tp[j] = P[j] + 0.5 * h * k1p[j];
  }
  f(tq, tp, k2q, k2p);
  for (std::size_t j = 0; j < m; ++j) {
    tq[j] = Q[j] + 0.5 * h * k2q[j];
    tp[j] = P[j] + 0.5 * h * k2p[j];
  }
  f(tq, tp, k3q, k3p);
  for (std::size_t j = 0; j < m; ++j) {
    tq[j] = Q[j] + h * k3q[j];
    tp[j] = P[j] + h * k3p[j];
  }
  f(tq, tp, k4q, k4p);
  for (std::size_t j = 0; j < m; ++j) {
    Q[j] += h / 6.0 * (k1q[j] + 2.0 * k2q[j] + 2.0 * k3q[j] + k4q[j]);
    P[j] += h / 6.0 * (k1p[j] + 2.0 * k2p[j] + 2.0 * k3p[j] + k4p[j]);
  }
}

}  // namespace

std::vector<IDEState> solve_ide(const ScenarioParams& params, const ContourGrid& grid, double tau_max,
                                double dt) {
  params.validate();
  require(dt > 0.0 && dt <= 1e-2, "ide: dt must lie in (0, 1e-2]");
  require(tau_max >= 0.0 && tau_max <= 100.0, "ide: tau_max must lie in [0, 100]");
  std::vector<double> targets;
  for (double t : params.tau_grid)
    if (t <= tau_max) targets.push_back(t);
  if (targets.empty()) targets = {0.0, tau_max};

  IDEState st = init_state(params, grid);
  Rhs f{grid, st.R, 1.0 / std::sqrt(params.lambda)};
  std::vector<IDEState> out;
  out.reserve(targets.size());
  double t = 0.0;
  for (double target : targets) {
    double start = t;
    long k = 0;
    while (t < target) {
      double next = start + double(k + 1) * dt;
      if (next > target - 1e-9 * dt) next = target;
      rk4_step(f, st.Q, st.P, next - t);
      t = next;
      ++k;
      double q = contour_integral(st.Q, grid, 0).value;
      double p1 = contour_integral(st.P, grid, 1).value;
      if (!(std::abs(q) <= 1.01) || !std::isfinite(p1))
        fail(ErrorCode::divergence, "ide: solution diverged at tau = " + std::to_string(t));
    }
    st.q = contour_integral(st.Q, grid, 0).value;
    st.p1 = contour_integral(st.P, grid, 1).value;
    st.tau = target;
    out.push_back(st);
  }
  return out;
}

std::vector<StationaryBranch> stationary_solutions(double lambda) {
  require(std::isfinite(lambda) && lambda > 0.0, "lambda must be positive");
  const double inf = std::numeric_limits<double>::infinity();
  const double sl = std::sqrt(lambda);
  std::vector<StationaryBranch> b;
  b.push_back({0.0, -2.0, 2.0, true, "alpha = 0"});
  b.push_back({0.0, 2.0, inf, false, "p1 > 2"});
  b.push_back({0.0, -inf, -2.0, false, "p1 < -2"});
  if (lambda >= 1.0) {
    double q = std::sqrt(1.0 - 1.0 / lambda);
    double p1 = 2.0 / sl;
    b.push_back({q, p1, p1, true, "lambda >= 1, alpha > 0"});
    b.push_back({-q, p1, p1, true, "lambda >= 1, alpha < 0"});
  } else {
    double q = std::sqrt((1.0 / lambda) * (1.0 / lambda - 1.0));
    double p1 = 2.0 / sl - 1.0 / (lambda * sl) + sl;
    b.push_back({q, p1, p1, false, "lambda < 1"});
    b.push_back({-q, p1, p1, false, "lambda < 1"});
  }
  return b;
}

StationaryResidual stationary_residual(const StationaryBranch& branch, double lambda, double p1,
                                       const ContourGrid& grid) {
  require(std::isfinite(p1), "stationary residual needs a finite p1");
  const double sl = std::sqrt(lambda), isl = 1.0 / sl;
  const double q = branch.q_inf;
  const double w = sl * q * q + p1;
  auto Qinf = [&](Complex z) { return q * (sl * g_sc(z) + 1.0) / (w - z); };
  auto Pinf = [&](Complex z) {
    Complex d = w - z;
    return q * q * sl * (sl * g_sc(z) + 1.0) / (d * d) + 1.0 / d;
  };

  StationaryResidual res;
  for (Complex z : grid.points) {
    Complex Q = Qinf(z), P = Pinf(z), G = g_sc(z);
    Complex a = q * (G + isl) + (z * isl - q * q - p1 * isl) * Q;
    Complex c = q * Q + isl + (z * isl - q * q - p1 * isl) * P;
    res.equation = std::max({res.equation, std::abs(a), std::abs(c)});
  }

  // integrate on a circle enclosing every singularity, then remove the residue at w
  // when the physical contour leaves it outside (branches with q != 0)
  ContourGrid big = ContourGrid::make(2.0 * std::max(2.0, std::abs(w)) + 1.0, 0.4, grid.num_points * 4);
  std::vector<Complex> qv(big.points.size()), pv(big.points.size());
  for (std::size_t j = 0; j < big.points.size(); ++j) {
    qv[j] = Qinf(big.points[j]);
    pv[j] = Pinf(big.points[j]);
  }
  double qi = contour_integral(qv, big, 0).value;
  double pi1 = contour_integral(pv, big, 1).value;
  if (q != 0.0) {
    double Gw = g_sc(Complex(w, 0.0)).real();
    double dGw = -Gw / (2.0 * Gw + w);
    qi += -q * (sl * Gw + 1.0);
    pi1 += q * q * sl * ((sl * Gw + 1.0) + w * sl * dGw) - w;
  }
  res.q_mismatch = std::abs(qi - q);
  res.p1_mismatch = std::abs(pi1 - p1);
  return res;
}

}  // namespace spikedyn
