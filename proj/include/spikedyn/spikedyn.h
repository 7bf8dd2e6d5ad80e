/* SPDX-License-Identifier: Apache-2.0 */
#ifndef SPIKEDYN_H
#define SPIKEDYN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sd_status {
  SD_OK = 0,
  SD_ERROR_INVALID_ARGUMENT = 1,
  SD_ERROR_DOMAIN = 2,
  SD_ERROR_OVERFLOW = 3,
  SD_ERROR_DIVERGENCE = 4,
  SD_ERROR_SINGULAR = 5,
  SD_ERROR_NUMERICAL = 6,
  SD_ERROR_INVALID_HANDLE = 7,
  SD_ERROR_OUT_OF_MEMORY = 8,
  SD_ERROR_UNKNOWN = 99
} sd_status;

enum { SD_ENSEMBLE_GAUSSIAN = 0, SD_ENSEMBLE_RADEMACHER = 1 };
enum { SD_PAIR_EQUAL = 0, SD_PAIR_ORTHOGONAL = 1 };
enum { SD_ACTIVATION_TANH = 0, SD_ACTIVATION_RELU = 1, SD_ACTIVATION_IDENTITY = 2 };

/* Null handles and null output pointers yield SD_ERROR_INVALID_HANDLE; destroy functions accept NULL. */
typedef struct sd_context_s* sd_context;
typedef struct sd_table_s* sd_table;

const char* sd_status_string(sd_status status);
/* message of the most recent failure on the calling thread */
const char* sd_last_error(void);

/* threads == 0 selects the available hardware parallelism */
sd_status sd_context_create(unsigned threads, sd_context* out);
sd_status sd_context_destroy(sd_context ctx);
sd_status sd_context_threads(sd_context ctx, unsigned* out);

/* column-major table of doubles plus named scalars */
sd_status sd_table_destroy(sd_table table);
sd_status sd_table_rows(sd_table table, size_t* out);
sd_status sd_table_cols(sd_table table, size_t* out);
sd_status sd_table_column_name(sd_table table, size_t col, const char** out);
sd_status sd_table_column_data(sd_table table, size_t col, const double** out);
sd_status sd_table_scalar_count(sd_table table, size_t* out);
sd_status sd_table_scalar(sd_table table, size_t idx, const char** name, double* value);

/* pointwise evaluations */
sd_status sd_semicircle_density(double s, double* out);
sd_status sd_stieltjes(double re, double im, double* out_re, double* out_im);
sd_status sd_m_lambda_scaled(double lambda, double tau, double* out);
sd_status sd_bar_q(double lambda, double alpha, double tau, double* out);
sd_status sd_cost_p1(double lambda, double alpha, double tau, double* cost, double* p1_bar);
sd_status sd_noiseless_q(double alpha, double tau, double* out);
sd_status sd_k_lambda(double lambda, double* out);

typedef struct sd_theory_params {
  double lambda;
  double alpha;
  double tau_max;
  int points;
} sd_theory_params;

typedef struct sd_ide_params {
  double lambda;
  double alpha;
  double tau_max;
  double dt;
  double rho;
  double margin;
  int contour_points;
  int points;
} sd_ide_params;

typedef struct sd_sim_params {
  double lambda;
  double alpha;
  double dt;
  int n;
  int steps;
  int runs;
  int ensemble;
  uint64_t seed;
} sd_sim_params;

typedef struct sd_concentration_params {
  const int* n_values;
  size_t n_count;
  int trials;
  double rho;
  double margin;
  int contour_points;
  int ensemble;
  int pair_kind;
  uint64_t seed;
} sd_concentration_params;

typedef struct sd_rf_params {
  int d;
  double psi1;
  double psi2;
  double ridge;
  int activation;
  uint64_t seed;
  double t_max;
  int points;
  int mc_draws;
} sd_rf_params;

typedef struct sd_landscape_params {
  double lambda;
  int n;
  int ensemble;
  uint64_t seed;
} sd_landscape_params;

void sd_theory_params_default(sd_theory_params* p);
void sd_ide_params_default(sd_ide_params* p);
void sd_sim_params_default(sd_sim_params* p);
void sd_concentration_params_default(sd_concentration_params* p);
void sd_rf_params_default(sd_rf_params* p);
void sd_landscape_params_default(sd_landscape_params* p);

/* columns: tau, q_bar, cost, p1_bar */
sd_status sd_theory_run(sd_context ctx, const sd_theory_params* p, sd_table* out);
/* columns: tau, q_bar, p1_bar, cost */
sd_status sd_ide_run(sd_context ctx, const sd_ide_params* p, sd_table* out);
/* columns: tau, q_p10, q_p50, q_p90, cost_*, p1_* */
sd_status sd_simulate_run(sd_context ctx, const sd_sim_params* p, sd_table* out);
/* simulate columns joined with q_theory, cost_theory, p1_theory on the same tau grid */
sd_status sd_compare_run(sd_context ctx, const sd_sim_params* p, sd_table* out);
/* columns: n, p10, p50, p90 */
sd_status sd_concentration_run(sd_context ctx, const sd_concentration_params* p, sd_table* out);
/* columns: t, q0, p0, p1, risk (+ mc_mean, mc_stderr when mc_draws > 0) */
sd_status sd_rf_run(sd_context ctx, const sd_rf_params* p, sd_table* out);
/* columns: index, eigenvalue, overlap, curvature */
sd_status sd_landscape_run(sd_context ctx, const sd_landscape_params* p, sd_table* out);

#ifdef __cplusplus
}
#endif

#endif
