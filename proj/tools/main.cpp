// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"
#include "spikedyn/spikedyn.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(sd_status st) {
  if (st == SD_OK) return;
  std::string msg = std::string(sd_status_string(st)) + ": " + sd_last_error();
  if (st == SD_ERROR_INVALID_ARGUMENT || st == SD_ERROR_DOMAIN) throw cli::ConfigError(msg);
  throw NumericalError(msg);
}

cli::Table fetch(sd_table t) {
  cli::Table out;
  size_t cols = 0, rows = 0;
  check(sd_table_cols(t, &cols));
  check(sd_table_rows(t, &rows));
  for (size_t c = 0; c < cols; ++c) {
    const char* name = nullptr;
    const double* data = nullptr;
    check(sd_table_column_name(t, c, &name));
    check(sd_table_column_data(t, c, &data));
    out.names.emplace_back(name);
    out.cols.emplace_back(data, data + rows);
  }
  return out;
}

std::vector<std::pair<std::string, double>> fetch_scalars(sd_table t) {
  std::vector<std::pair<std::string, double>> out;
  size_t n = 0;
  check(sd_table_scalar_count(t, &n));
  for (size_t i = 0; i < n; ++i) {
    const char* name = nullptr;
    double v = 0.0;
    check(sd_table_scalar(t, i, &name, &v));
    out.emplace_back(name, v);
  }
  return out;
}

// RAII owner for C handles
struct TableHandle {
  sd_table t = nullptr;
  ~TableHandle() { sd_table_destroy(t); }
};

struct ContextHandle {
  sd_context c = nullptr;
  ~ContextHandle() { sd_context_destroy(c); }
};

void range(bool ok, const std::string& msg) {
  if (!ok) throw cli::ConfigError(msg);
}

int ensemble_of(const cli::JobConfig& cfg) {
  std::string e = cfg.text("ensemble", "gaussian");
  if (e == "gaussian" || e == "goe" || e == "gaussian_goe") return SD_ENSEMBLE_GAUSSIAN;
  if (e == "rademacher") return SD_ENSEMBLE_RADEMACHER;
  throw cli::ConfigError("unknown ensemble: " + e);
}

std::uint64_t seed_of(const cli::JobConfig& cfg) {
  long s = cfg.integer("seed", 1);
  range(s >= 0, "seed must be non-negative");
  return std::uint64_t(s);
}

void check_scenario(double lambda, double alpha) {
  range(lambda > 0.0, "lambda must be positive");
  range(std::abs(alpha) <= 1.0, "alpha must lie in [-1, 1]");
}

sd_sim_params sim_params(const cli::JobConfig& cfg) {
  cfg.require_keys({"lambda", "alpha"});
  sd_sim_params p;
  sd_sim_params_default(&p);
  p.lambda = cfg.real("lambda", p.lambda);
  p.alpha = cfg.real("alpha", p.alpha);
  check_scenario(p.lambda, p.alpha);
  p.n = int(cfg.integer("n", p.n));
  p.runs = int(cfg.integer("runs", p.runs));
  p.dt = cfg.real("dt", p.dt);
  range(p.n >= 2, "n must be at least 2");
  range(p.runs >= 2, "runs must be at least 2");
  range(p.dt > 0.0, "dt must be positive");
  if (cfg.has("steps")) {
    p.steps = int(cfg.integer("steps", p.steps));
    if (cfg.has("tau-max"))
      range(std::abs(p.steps * p.dt - cfg.real("tau-max", 0.0)) <= 1e-9 * p.steps * p.dt,
            "steps * dt must equal tau-max");
  } else if (cfg.has("tau-max")) {
    p.steps = int(std::llround(cfg.real("tau-max", 0.0) / p.dt));
  }
  range(p.steps >= 1, "steps must be positive");
  p.ensemble = ensemble_of(cfg);
  p.seed = seed_of(cfg);
  return p;
}

struct Job {
  cli::Table table;
  std::vector<std::pair<std::string, double>> scalars;
  cli::PlotSpec plot;
};

Job dispatch(const cli::JobConfig& cfg, sd_context ctx) {
  const std::string& sub = cfg.subcommand();
  TableHandle h;
  Job job;
  if (sub == "theory") {
    cfg.require_keys({"lambda", "alpha"});
    sd_theory_params p;
    sd_theory_params_default(&p);
    p.lambda = cfg.real("lambda", p.lambda);
    p.alpha = cfg.real("alpha", p.alpha);
    p.tau_max = cfg.real("tau-max", p.tau_max);
    p.points = int(cfg.integer("points", p.points));
    check_scenario(p.lambda, p.alpha);
    range(p.tau_max > 0.0, "tau-max must be positive");
    range(p.points >= 2, "points must be at least 2");
    check(sd_theory_run(ctx, &p, &h.t));
    job.plot = {"theory: lambda=" + cfg.text("lambda", "") + ", alpha=" + cfg.text("alpha", ""), "tau", "value",
                {"q_bar", "cost", "p1_bar"}};
  } else if (sub == "ide") {
    cfg.require_keys({"lambda", "alpha"});
    sd_ide_params p;
    sd_ide_params_default(&p);
    p.lambda = cfg.real("lambda", p.lambda);
    p.alpha = cfg.real("alpha", p.alpha);
    p.tau_max = cfg.real("tau-max", p.tau_max);
    p.points = int(cfg.integer("points", p.points));
    p.dt = cfg.real("dt", p.dt);
    p.rho = cfg.real("rho", p.rho);
    p.contour_points = int(cfg.integer("contour-points", p.contour_points));
    check_scenario(p.lambda, p.alpha);
    range(p.tau_max > 0.0 && p.tau_max <= 100.0, "tau-max must lie in (0, 100]");
    range(p.dt > 0.0 && p.dt <= 1e-2, "dt must lie in (0, 1e-2]");
    range(p.points >= 2, "points must be at least 2");
    range(p.contour_points >= 64, "contour-points must be at least 64");
    range(p.rho > 2.0 + p.margin, "rho must exceed 2.4");
    check(sd_ide_run(ctx, &p, &h.t));
    job.plot = {"ide oracle: lambda=" + cfg.text("lambda", "") + ", alpha=" + cfg.text("alpha", ""), "tau", "value",
                {"q_bar", "p1_bar", "cost"}};
  } else if (sub == "simulate" || sub == "compare") {
    sd_sim_params p = sim_params(cfg);
    std::string title = sub + ": lambda=" + cfg.text("lambda", "") + ", alpha=" + cfg.text("alpha", "") +
                        ", n=" + std::to_string(p.n);
    if (sub == "simulate") {
      check(sd_simulate_run(ctx, &p, &h.t));
      job.plot = {title, "tau", "overlap q", {"q_p10", "q_p50", "q_p90"}};
    } else {
      check(sd_compare_run(ctx, &p, &h.t));
      job.plot = {title, "tau", "overlap q", {"q_theory", "q_p10", "q_p50", "q_p90"}};
    }
  } else if (sub == "concentration") {
    sd_concentration_params p;
    sd_concentration_params_default(&p);
    std::vector<int> ns = cfg.int_list("n", {100, 400, 1600});
    for (int n : ns) range(n >= 2 && n <= 4000, "n values must lie in [2, 4000]");
    for (std::size_t i = 1; i < ns.size(); ++i) range(ns[i] > ns[i - 1], "n values must increase");
    p.n_values = ns.data();
    p.n_count = ns.size();
    p.trials = int(cfg.integer("runs", p.trials));
    p.rho = cfg.real("rho", p.rho);
    p.contour_points = int(cfg.integer("contour-points", p.contour_points));
    p.ensemble = ensemble_of(cfg);
    p.seed = seed_of(cfg);
    range(p.trials >= 1, "runs must be positive");
    range(p.contour_points >= 64, "contour-points must be at least 64");
    range(p.rho > 2.0 + p.margin, "rho must exceed 2.4");
    check(sd_concentration_run(ctx, &p, &h.t));
    job.plot = {"resolvent concentration", "n", "sup deviation", {"p10", "p50", "p90"}};
  } else if (sub == "rf") {
    cfg.require_keys({"d"});
    sd_rf_params p;
    sd_rf_params_default(&p);
    p.d = int(cfg.integer("d", p.d));
    p.psi1 = cfg.real("psi1", p.psi1);
    p.psi2 = cfg.real("psi2", p.psi2);
    p.ridge = cfg.real("ridge", p.ridge);
    p.t_max = cfg.real("tau-max", p.t_max);
    p.points = int(cfg.integer("points", p.points));
    p.mc_draws = int(cfg.integer("runs", p.mc_draws));
    p.seed = seed_of(cfg);
    std::string act = cfg.text("activation", "tanh");
    if (act == "tanh") p.activation = SD_ACTIVATION_TANH;
    else if (act == "relu") p.activation = SD_ACTIVATION_RELU;
    else if (act == "identity") p.activation = SD_ACTIVATION_IDENTITY;
    else throw cli::ConfigError("unknown activation: " + act);
    range(p.d >= 4, "d must be at least 4");
    range(p.psi1 > 0.0 && p.psi2 > 0.0, "psi1 and psi2 must be positive");
    range(p.ridge >= 0.0, "ridge must be non-negative");
    range(p.t_max > 0.0, "tau-max must be positive");
    range(p.points >= 2, "points must be at least 2");
    range(p.mc_draws == 0 || p.mc_draws >= 2, "runs must be 0 or at least 2");
    check(sd_rf_run(ctx, &p, &h.t));
    job.plot = {"random features: d=" + std::to_string(p.d), "t", "risk", {"risk"}};
    if (p.mc_draws > 0) job.plot.series.push_back("mc_mean");
  } else if (sub == "landscape") {
    cfg.require_keys({"lambda"});
    sd_landscape_params p;
    sd_landscape_params_default(&p);
    p.lambda = cfg.real("lambda", p.lambda);
    p.n = int(cfg.integer("n", p.n));
    p.ensemble = ensemble_of(cfg);
    p.seed = seed_of(cfg);
    range(p.lambda > 0.0, "lambda must be positive");
    range(p.n >= 2 && p.n <= 400, "n must lie in [2, 400]");
    check(sd_landscape_run(ctx, &p, &h.t));
    job.plot = {"landscape: lambda=" + cfg.text("lambda", ""), "index", "value", {"eigenvalue", "curvature"}};
  } else {
    throw cli::ConfigError("unknown subcommand: " + sub);
  }
  job.table = fetch(h.t);
  job.scalars = fetch_scalars(h.t);
  return job;
}

const std::map<std::string, std::string> kDescriptions{
    {"theory", "closed-form overlap, cost and p1 curves"},
    {"ide", "integro-differential oracle on a complex contour"},
    {"simulate", "finite-n projected gradient descent ensemble"},
    {"compare", "theory curves joined with simulation quantiles"},
    {"concentration", "resolvent concentration sweep over n"},
    {"rf", "random-feature ridge regression risk dynamics"},
    {"landscape", "critical points of the spherical cost"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient descent dynamics of the spiked Wigner model"};
  app.require_subcommand(1);
  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> flag_options;
  std::map<std::string, CLI::App*> subs;
  std::string config_path;
  bool emit_svg = false;
  for (const auto& [name, desc] : kDescriptions) {
    CLI::App* sc = app.add_subcommand(name, desc);
    sc->add_option("--config", config_path, "key=value config file");
    for (const auto& key : cli::known_keys()) {
      if (key == "emit-svg") continue;
      flag_options[name + "/" + key] = sc->add_option("--" + key, flag_values[key]);
    }
    flag_options[name + "/emit-svg"] = sc->add_flag("--emit-svg", emit_svg, "also write an SVG plot");
    subs[name] = sc;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  std::string sub;
  for (const auto& [name, sc] : subs)
    if (sc->parsed()) sub = name;

  try {
    cli::KeyValues kv;
    if (!config_path.empty()) kv = cli::parse_config_file(config_path);
    for (const auto& key : cli::known_keys())
      if (flag_options[sub + "/" + key]->count() > 0) kv[key] = key == "emit-svg" ? "true" : flag_values[key];
    cli::JobConfig cfg(sub, kv);

    long threads = cfg.integer("threads", 0);
    range(threads >= 0, "threads must be non-negative");
    std::string outdir = cfg.text("output-dir", ".");
    bool svg = cfg.flag("emit-svg", false);

    ContextHandle ctx;
    check(sd_context_create(unsigned(threads), &ctx.c));
    Job job = dispatch(cfg, ctx.c);
    if (!job.table.all_finite()) throw NumericalError("non-finite value in " + sub + " output");
    for (const auto& [name, v] : job.scalars)
      if (!std::isfinite(v)) throw NumericalError("non-finite summary value " + name);

    std::filesystem::create_directories(outdir);
    std::string stem = (std::filesystem::path(outdir) / sub).string();
    cli::write_file(stem + ".csv", cli::format_csv(job.table));
    if (svg) cli::write_file(stem + ".svg", cli::format_svg(job.table, job.plot));
    for (const auto& [name, v] : job.scalars) std::printf("%s = %.17g\n", name.c_str(), v);
    std::printf("wrote %s.csv\n", stem.c_str());
    return kExitOk;
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
