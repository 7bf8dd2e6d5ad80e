// SPDX-License-Identifier: Apache-2.0
#include "spikedyn/spikedyn.h"

#include <cmath>
#include <memory>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "spikedyn/error.hpp"
#include "spikedyn/gd.hpp"
#include "spikedyn/ide.hpp"
#include "spikedyn/landscape.hpp"
#include "spikedyn/matrix_lab.hpp"
#include "spikedyn/parallel.hpp"
#include "spikedyn/rf.hpp"
#include "spikedyn/theory.hpp"

struct sd_context_s {
  explicit sd_context_s(unsigned threads) : pool(threads) {}
  spikedyn::ThreadPool pool;
};

struct sd_table_s {
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;
  std::vector<std::pair<std::string, double>> scalars;

  void add(std::string name, std::vector<double> col) {
    names.push_back(std::move(name));
    cols.push_back(std::move(col));
  }
};

namespace {

thread_local std::string g_last_error;

sd_status to_status(spikedyn::ErrorCode c) {
  using spikedyn::ErrorCode;
  switch (c) {
    case ErrorCode::invalid_argument: return SD_ERROR_INVALID_ARGUMENT;
    case ErrorCode::domain: return SD_ERROR_DOMAIN;
    case ErrorCode::overflow: return SD_ERROR_OVERFLOW;
    case ErrorCode::divergence: return SD_ERROR_DIVERGENCE;
    case ErrorCode::singular: return SD_ERROR_SINGULAR;
    case ErrorCode::numerical: return SD_ERROR_NUMERICAL;
  }
  return SD_ERROR_UNKNOWN;
}

template <class F>
sd_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return SD_OK;
  } catch (const spikedyn::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SD_ERROR_OUT_OF_MEMORY;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SD_ERROR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown error";
    return SD_ERROR_UNKNOWN;
  }
}

sd_status bad_handle(const char* what) {
  g_last_error = std::string("invalid handle or null pointer: ") + what;
  return SD_ERROR_INVALID_HANDLE;
}

std::vector<double> linspace(double a, double b, int points) {
  spikedyn::require(points >= 2, "points must be at least 2");
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i) v[i] = a + (b - a) * double(i) / double(points - 1);
  return v;
}

spikedyn::Ensemble to_ensemble(int e) {
  spikedyn::require(e == SD_ENSEMBLE_GAUSSIAN || e == SD_ENSEMBLE_RADEMACHER, "unknown ensemble");
  return e == SD_ENSEMBLE_GAUSSIAN ? spikedyn::Ensemble::gaussian_goe : spikedyn::Ensemble::rademacher;
}

spikedyn::SimConfig to_sim(const sd_sim_params* p) {
  spikedyn::SimConfig c;
  c.n = p->n;
  c.lambda = p->lambda;
  c.alpha = p->alpha;
  c.dt = p->dt;
  c.steps = p->steps;
  c.runs = p->runs;
  c.ensemble = to_ensemble(p->ensemble);
  c.base_seed = p->seed;
  c.validate();
  return c;
}

void add_quantiles(sd_table_s& t, const std::string& stem, const spikedyn::Quantiles& q) {
  t.add(stem + "_p10", q[0]);
  t.add(stem + "_p50", q[1]);
  t.add(stem + "_p90", q[2]);
}

template <class F>
sd_status run_table(sd_context ctx, const void* params, sd_table* out, F&& build) {
  if (!ctx) return bad_handle("context");
  if (!params || !out) return bad_handle("argument");
  *out = nullptr;
  return guard([&] {
    auto t = std::make_unique<sd_table_s>();
    build(*t, &ctx->pool);
    *out = t.release();
  });
}

}  // namespace

extern "C" {

const char* sd_status_string(sd_status status) {
  switch (status) {
    case SD_OK: return "ok";
    case SD_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case SD_ERROR_DOMAIN: return "domain error";
    case SD_ERROR_OVERFLOW: return "overflow";
    case SD_ERROR_DIVERGENCE: return "divergence";
    case SD_ERROR_SINGULAR: return "singular system";
    case SD_ERROR_NUMERICAL: return "numerical failure";
    case SD_ERROR_INVALID_HANDLE: return "invalid handle";
    case SD_ERROR_OUT_OF_MEMORY: return "out of memory";
    default: return "unknown error";
  }
}

const char* sd_last_error(void) { return g_last_error.c_str(); }

sd_status sd_context_create(unsigned threads, sd_context* out) {
  if (!out) return bad_handle("out");
  *out = nullptr;
  return guard([&] { *out = new sd_context_s(threads); });
}

sd_status sd_context_destroy(sd_context ctx) {
  delete ctx;
  return SD_OK;
}

sd_status sd_context_threads(sd_context ctx, unsigned* out) {
  if (!ctx || !out) return bad_handle("context");
  *out = ctx->pool.size();
  return SD_OK;
}

sd_status sd_table_destroy(sd_table table) {
  delete table;
  return SD_OK;
}

sd_status sd_table_rows(sd_table t, size_t* out) {
  if (!t || !out) return bad_handle("table");
  *out = t->cols.empty() ? 0 : t->cols.front().size();
  return SD_OK;
}

sd_status sd_table_cols(sd_table t, size_t* out) {
  if (!t || !out) return bad_handle("table");
  *out = t->cols.size();
  return SD_OK;
}

sd_status sd_table_column_name(sd_table t, size_t col, const char** out) {
  if (!t || !out) return bad_handle("table");
  if (col >= t->names.size()) {
    g_last_error = "column index out of range";
    return SD_ERROR_INVALID_ARGUMENT;
  }
  *out = t->names[col].c_str();
  return SD_OK;
}

sd_status sd_table_column_data(sd_table t, size_t col, const double** out) {
  if (!t || !out) return bad_handle("table");
  if (col >= t->cols.size()) {
    g_last_error = "column index out of range";
    return SD_ERROR_INVALID_ARGUMENT;
  }
  *out = t->cols[col].data();
  return SD_OK;
}

sd_status sd_table_scalar_count(sd_table t, size_t* out) {
  if (!t || !out) return bad_handle("table");
  *out = t->scalars.size();
  return SD_OK;
}

sd_status sd_table_scalar(sd_table t, size_t idx, const char** name, double* value) {
  if (!t || !name || !value) return bad_handle("table");
  if (idx >= t->scalars.size()) {
    g_last_error = "scalar index out of range";
    return SD_ERROR_INVALID_ARGUMENT;
  }
  *name = t->scalars[idx].first.c_str();
  *value = t->scalars[idx].second;
  return SD_OK;
}

sd_status sd_semicircle_density(double s, double* out) {
  if (!out) return bad_handle("out");
  return guard([&] { *out = spikedyn::mu_sc(s); });
}

sd_status sd_stieltjes(double re, double im, double* out_re, double* out_im) {
  if (!out_re || !out_im) return bad_handle("out");
  return guard([&] {
    auto g = spikedyn::g_sc({re, im});
    *out_re = g.real();
    *out_im = g.imag();
  });
}

sd_status sd_m_lambda_scaled(double lambda, double tau, double* out) {
  if (!out) return bad_handle("out");
  return guard([&] { *out = spikedyn::m_lambda_scaled(lambda, tau); });
}

sd_status sd_bar_q(double lambda, double alpha, double tau, double* out) {
  if (!out) return bad_handle("out");
  return guard([&] { *out = spikedyn::bar_q({lambda, alpha, {}}, tau); });
}

sd_status sd_cost_p1(double lambda, double alpha, double tau, double* cost, double* p1_bar) {
  if (!cost || !p1_bar) return bad_handle("out");
  return guard([&] {
    auto c = spikedyn::cost_and_p1({lambda, alpha, {}}, tau);
    *cost = c.cost;
    *p1_bar = c.p1_bar;
  });
}

sd_status sd_noiseless_q(double alpha, double tau, double* out) {
  if (!out) return bad_handle("out");
  return guard([&] { *out = spikedyn::noiseless_q(alpha, tau); });
}

sd_status sd_k_lambda(double lambda, double* out) {
  if (!out) return bad_handle("out");
  return guard([&] { *out = spikedyn::k_lambda(lambda); });
}

void sd_theory_params_default(sd_theory_params* p) {
  if (p) *p = {2.0, 0.1, 10.0, 200};
}

void sd_ide_params_default(sd_ide_params* p) {
  if (p) *p = {2.0, 0.1, 5.0, 1e-3, 2.5, 0.4, 256, 51};
}

void sd_sim_params_default(sd_sim_params* p) {
  if (p) *p = {2.0, 0.1, 0.1, 1000, 100, 100, SD_ENSEMBLE_GAUSSIAN, 1};
}

void sd_concentration_params_default(sd_concentration_params* p) {
  static const int kDefaultN[] = {100, 400, 1600};
  if (p) *p = {kDefaultN, 3, 20, 2.5, 0.4, 64, SD_ENSEMBLE_GAUSSIAN, SD_PAIR_EQUAL, 1};
}

void sd_rf_params_default(sd_rf_params* p) {
  if (p) *p = {100, 1.0, 1.5, 0.1, SD_ACTIVATION_TANH, 1, 10.0, 101, 0};
}

void sd_landscape_params_default(sd_landscape_params* p) {
  if (p) *p = {4.0, 100, SD_ENSEMBLE_GAUSSIAN, 1};
}

sd_status sd_theory_run(sd_context ctx, const sd_theory_params* p, sd_table* out) {
  return run_table(ctx, p, out, [&](sd_table_s& t, spikedyn::ThreadPool* pool) {
    spikedyn::require(p->tau_max > 0.0, "tau_max must be positive");
    spikedyn::ScenarioParams sp{p->lambda, p->alpha, linspace(0.0, p->tau_max, p->points)};
    auto c = spikedyn::theory_curve(sp, pool);
    t.add("tau", c.tau);
    t.add("q_bar", c.q_bar);
    t.add("cost", c.cost);
    t.add("p1_bar", c.p1_bar);
    double degraded = 0.0;
    for (bool b : c.degraded) degraded += b;
    t.scalars.push_back({"degraded_points", degraded});
  });
}

sd_status sd_ide_run(sd_context ctx, const sd_ide_params* p, sd_table* out) {
  return run_table(ctx, p, out, [&](sd_table_s& t, spikedyn::ThreadPool*) {
    spikedyn::ScenarioParams sp{p->lambda, p->alpha, linspace(0.0, p->tau_max, p->points)};
    auto grid = spikedyn::ContourGrid::make(p->rho, p->margin, p->contour_points);
    auto states = spikedyn::solve_ide(sp, grid, p->tau_max, p->dt);
    std::vector<double> tau, q, p1, cost;
    const double isl = 1.0 / std::sqrt(p->lambda);
    for (const auto& s : states) {
      tau.push_back(s.tau);
      q.push_back(s.q);
      p1.push_back(s.p1);
      cost.push_back(1.0 - (s.q * s.q + s.p1 * isl));
    }
    t.add("tau", tau);
    t.add("q_bar", q);
    t.add("p1_bar", p1);
    t.add("cost", cost);
  });
}

sd_status sd_simulate_run(sd_context ctx, const sd_sim_params* p, sd_table* out) {
  return run_table(ctx, p, out, [&](sd_table_s& t, spikedyn::ThreadPool* pool) {
    auto st = spikedyn::ensemble(to_sim(p), pool);
    t.add("tau", st.tau);
    add_quantiles(t, "q", st.q);
    add_quantiles(t, "cost", st.cost);
    add_quantiles(t, "p1", st.p1);
    t.scalars.push_back({"max_norm_drift", st.max_norm_drift});
  });
}

sd_status sd_compare_run(sd_context ctx, const sd_sim_params* p, sd_table* out) {
  return run_table(ctx, p, out, [&](sd_table_s& t, spikedyn::ThreadPool* pool) {
    auto cfg = to_sim(p);
    auto st = spikedyn::ensemble(cfg, pool);
    auto th = spikedyn::theory_curve({cfg.lambda, cfg.alpha, st.tau}, pool);
    t.add("tau", st.tau);
    t.add("q_theory", th.q_bar);
    add_quantiles(t, "q", st.q);
    t.add("cost_theory", th.cost);
    add_quantiles(t, "cost", st.cost);
    t.add("p1_theory", th.p1_bar);
    add_quantiles(t, "p1", st.p1);
    t.scalars.push_back({"max_norm_drift", st.max_norm_drift});
  });
}

sd_status sd_concentration_run(sd_context ctx, const sd_concentration_params* p, sd_table* out) {
  return run_table(ctx, p, out, [&](sd_table_s& t, spikedyn::ThreadPool* pool) {
    spikedyn::require(p->n_values && p->n_count > 0, "concentration needs at least one n");
    spikedyn::require(p->pair_kind == SD_PAIR_EQUAL || p->pair_kind == SD_PAIR_ORTHOGONAL, "unknown pair kind");
    std::vector<int> ns(p->n_values, p->n_values + p->n_count);
    for (std::size_t i = 1; i < ns.size(); ++i) spikedyn::require(ns[i] > ns[i - 1], "n values must increase");
    auto grid = spikedyn::ContourGrid::make(p->rho, p->margin, p->contour_points);
    auto rep = spikedyn::concentration_sweep(
        ns, p->trials, grid,
        p->pair_kind == SD_PAIR_EQUAL ? spikedyn::PairKind::uv_equal : spikedyn::PairKind::uv_orthogonal,
        to_ensemble(p->ensemble), p->seed, pool);
    std::vector<double> n, q10, q50, q90;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      n.push_back(ns[i]);
      q10.push_back(rep.quantiles[i][0]);
      q50.push_back(rep.quantiles[i][1]);
      q90.push_back(rep.quantiles[i][2]);
    }
    t.add("n", n);
    t.add("p10", q10);
    t.add("p50", q50);
    t.add("p90", q90);
  });
}

sd_status sd_rf_run(sd_context ctx, const sd_rf_params* p, sd_table* out) {
  return run_table(ctx, p, out, [&](sd_table_s& t, spikedyn::ThreadPool* pool) {
    spikedyn::RFConfig cfg;
    cfg.d = p->d;
    cfg.psi1 = p->psi1;
    cfg.psi2 = p->psi2;
    cfg.lambda = p->ridge;
    cfg.seed = p->seed;
    spikedyn::require(p->activation >= SD_ACTIVATION_TANH && p->activation <= SD_ACTIVATION_IDENTITY,
                      "unknown activation");
    cfg.activation = p->activation == SD_ACTIVATION_TANH   ? spikedyn::Activation::tanh
                     : p->activation == SD_ACTIVATION_RELU ? spikedyn::Activation::relu
                                                           : spikedyn::Activation::identity;
    spikedyn::require(p->t_max > 0.0, "t_max must be positive");
    spikedyn::require(p->mc_draws == 0 || p->mc_draws >= 2, "mc draws must be 0 or at least 2");
    auto [inst, meas] = spikedyn::build_instance(cfg);
    auto grid = linspace(0.0, p->t_max, p->points);
    auto c = spikedyn::rf_risk_curve(inst, meas, inst.lambda_star, grid);
    t.add("t", c.t);
    t.add("q0", c.q0);
    t.add("p0", c.p0);
    t.add("p1", c.p1);
    t.add("risk", c.risk);
    if (p->mc_draws > 0) {
      auto mc = spikedyn::rf_flow_mc(inst, inst.lambda_star, grid, p->mc_draws, p->seed, pool);
      t.add("mc_mean", mc.mean);
      t.add("mc_stderr", mc.stderr_);
    }
    t.scalars.push_back({"C_Y", inst.C_Y});
    t.scalars.push_back({"lambda_star", inst.lambda_star});
    t.scalars.push_back({"ridge_risk", spikedyn::rf_risk_direct(inst, spikedyn::rf_ridge_solution(inst))});
    t.scalars.push_back({"identity_error", spikedyn::rf_expectation_identity(inst, meas, inst.lambda_star, grid)});
  });
}

sd_status sd_landscape_run(sd_context ctx, const sd_landscape_params* p, sd_table* out) {
  return run_table(ctx, p, out, [&](sd_table_s& t, spikedyn::ThreadPool*) {
    auto noise = spikedyn::sample_wigner(p->n, to_ensemble(p->ensemble), p->seed);
    auto star = spikedyn::init_vectors(p->n, 1.0).second;
    auto rep = spikedyn::landscape_check(noise, p->lambda, star);
    std::vector<double> idx, eig(rep.eigenvalues.data(), rep.eigenvalues.data() + rep.eigenvalues.size());
    for (int i = 0; i < p->n; ++i) idx.push_back(i);
    t.add("index", idx);
    t.add("eigenvalue", eig);
    t.add("overlap", rep.overlaps);
    t.add("curvature", rep.curvature);
    t.scalars.push_back({"top_overlap", rep.top_overlap});
    t.scalars.push_back({"saddle_count", double(rep.saddle_count)});
    t.scalars.push_back({"top_is_minimum", rep.top_is_minimum ? 1.0 : 0.0});
    t.scalars.push_back({"max_gradient_residual", rep.max_gradient_residual});
    t.scalars.push_back({"top_min_hessian_eig", rep.top_min_hessian_eig});
    t.scalars.push_back({"degenerate", rep.degenerate ? 1.0 : 0.0});
  });
}

}  // extern "C"
