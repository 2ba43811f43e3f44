// Command-line surface: simulate | fit | rolling | evaluate | procrustes.
// Exit codes: 0 success, 2 validation error, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bcglpm/config.hpp"
#include "bcglpm/dgp.hpp"
#include "bcglpm/engine.hpp"
#include "bcglpm/errors.hpp"
#include "bcglpm/io.hpp"
#include "bcglpm/metrics.hpp"
#include "bcglpm/rolling.hpp"
#include "bcglpm/version.hpp"

namespace {

using bcglpm::RunConfig;
using json = nlohmann::json;

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> split_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_commas(s)) out.push_back(std::stod(item));
  return out;
}

std::vector<long> split_longs(const std::string& s) {
  std::vector<long> out;
  for (const auto& item : split_commas(s)) out.push_back(std::stol(item));
  return out;
}

struct CliState {
  RunConfig config;
  std::string config_path;
  std::string mode_str = "bcglpm1";
  std::string market_cols_str;
  std::string ridge_grid_str;
  bool no_standardize = false;
  bool no_log_rv = false;

  // simulate
  long sim_n = 50;
  long sim_t = 0;
  std::string sim_setup = "lag0";
  double sim_edge_prob = 0.2;
  bool grid_mode = false;
  std::string grid_n_list = "50";
  std::string grid_t_mults = "2,10";
  std::string grid_setups = "lag0,lag1";
  int grid_reps = 10;

  // evaluate
  std::string edges_path;
  std::string truth_path;
  std::string report_path;

  // procrustes
  std::string target_path;
  std::string source_path;
  std::string series_str;
};

void add_fit_options(CLI::App* cmd, CliState& st) {
  cmd->add_option("--mode", st.mode_str, "Model mode: bcglpm0|bcglpm1|sssl");
  cmd->add_option("--iters", st.config.fit.n_iter, "MCMC sweeps (default 10000)");
  cmd->add_option("--burnin", st.config.fit.burn_in, "Burn-in sweeps (default 3000)");
  cmd->add_option("--chains", st.config.fit.n_chains, "Independent chains");
  cmd->add_option("--seed", st.config.fit.seed, "RNG seed (fixed default)");
  cmd->add_option("--v0", st.config.fit.v0, "Spike standard deviation");
  cmd->add_option("--slab-h", st.config.fit.h, "Slab scale (v1 = h v0)");
  cmd->add_option("--theta0", st.config.fit.theta0, "Intercept prior mean");
  cmd->add_option("--tau-theta-sq", st.config.fit.tau_theta_sq,
                  "Intercept prior variance");
  cmd->add_option("--tau-lambda-sq", st.config.fit.tau_lambda_sq,
                  "Eigenvalue prior variance (default: n)");
  cmd->add_option("--thin", st.config.fit.thin, "Thinning for stored samples");
  cmd->add_option("--ridge-grid", st.ridge_grid_str,
                  "Comma-separated c0 grid for shrinkage selection");
  cmd->add_option("--ridge-split", st.config.fit.ridge_split,
                  "Estimation fraction for MSFE");
  cmd->add_option("--ridge-tol", st.config.fit.ridge_tol,
                  "MSFE first-difference tolerance");
  cmd->add_flag("--no-standardize", st.no_standardize,
                "Skip per-window column standardization");
  cmd->add_flag("--random-column-order", st.config.fit.random_column_order,
                "Randomize the sigma column sweep order");
  cmd->add_option("--market-cols", st.market_cols_str,
                  "Comma-separated market indicator column names");
  cmd->add_option("--config", st.config_path,
                  "JSON or TOML config; values override flags");
}

void finalize_fit_options(CliState& st) {
  st.config.fit.mode = bcglpm::model_mode_from_string(st.mode_str);
  if (!st.ridge_grid_str.empty()) {
    st.config.fit.ridge_grid = split_doubles(st.ridge_grid_str);
  }
  if (st.no_standardize) st.config.fit.standardize = false;
  if (st.no_log_rv) st.config.log_rv = false;
  if (!st.market_cols_str.empty()) {
    st.config.market_cols = split_commas(st.market_cols_str);
  }
  if (!st.config_path.empty()) {
    bcglpm::load_config_file(st.config, st.config_path);
  }
  st.config.validate_market_cols();
}

int run_simulate(CliState& st) {
  finalize_fit_options(st);
  if (st.config.out_dir.empty()) {
    throw bcglpm::validation_error("simulate: --out required");
  }
  if (st.grid_mode) {
    std::vector<bcglpm::LagMode> setups;
    for (const auto& s : split_commas(st.grid_setups)) {
      setups.push_back(s == "lag1" ? bcglpm::LagMode::lag1 : bcglpm::LagMode::lag0);
    }
    const auto manifest = bcglpm::replicate_benchmark(
        split_longs(st.grid_n_list), split_longs(st.grid_t_mults), setups,
        st.grid_reps, st.config.fit.seed, st.config.out_dir);
    std::printf("wrote %zu instances under %s\n", manifest.cells.size(),
                st.config.out_dir.c_str());
    return 0;
  }
  bcglpm::DgpSpec spec;
  spec.n = st.sim_n;
  spec.t = st.sim_t > 0 ? st.sim_t : 2 * st.sim_n;
  spec.setup = st.sim_setup == "lag1" ? bcglpm::LagMode::lag1 : bcglpm::LagMode::lag0;
  spec.edge_prob = st.sim_edge_prob;
  spec.seed = st.config.fit.seed;
  bcglpm::write_instance(st.config.out_dir, bcglpm::generate(spec), spec);
  std::printf("wrote instance (n=%ld, T=%ld, %s) to %s\n", spec.n, spec.t,
              bcglpm::to_string(spec.setup), st.config.out_dir.c_str());
  return 0;
}

int run_fit(CliState& st) {
  finalize_fit_options(st);
  if (st.config.input_path.empty() || st.config.out_dir.empty()) {
    throw bcglpm::validation_error("fit: --data and --out required");
  }
  bcglpm::TimeSeriesPanel panel = bcglpm::read_panel_csv(st.config.input_path);
  panel = bcglpm::split_market(panel, st.config.market_cols);
  const bcglpm::FitResult result = bcglpm::fit(panel, st.config.fit);
  bcglpm::emit_outputs(result.summary, result.traces, st.config.out_dir,
                       panel.labels, st.config.fit);
  std::printf("fit done: n=%ld, density=%.4f%s\n", result.summary.edge_prob.rows(),
              bcglpm::network_density(result.summary.median_graph),
              result.summary.psrf
                  ? (", psrf=" + std::to_string(*result.summary.psrf)).c_str()
                  : "");
  return 0;
}

int run_rolling(CliState& st) {
  finalize_fit_options(st);
  if (st.config.input_path.empty() || st.config.out_dir.empty()) {
    throw bcglpm::validation_error("rolling: --prices and --out required");
  }
  const bcglpm::PriceCsv prices = bcglpm::ingest_prices(st.config.input_path);
  bcglpm::TimeSeriesPanel panel =
      bcglpm::realized_volatility(prices, st.config.log_rv);
  panel = bcglpm::split_market(panel, st.config.market_cols);
  const bcglpm::WindowPlan plan =
      bcglpm::make_window_plan(panel.rows(), st.config.window_len, st.config.step);
  const bcglpm::RollingResult rolled = bcglpm::rolling_fit(panel, plan, st.config);
  std::printf("rolling done: %zu windows -> %s\n", rolled.windows.size(),
              st.config.out_dir.c_str());
  return 0;
}

int run_evaluate(CliState& st) {
  if (st.edges_path.empty()) {
    throw bcglpm::validation_error("evaluate: --edges required");
  }
  const bcglpm::EdgesFile edges = bcglpm::read_edges_csv(st.edges_path);
  json doc;
  doc["n"] = edges.edge_prob.rows();
  doc["density"] = bcglpm::network_density(edges.median_graph);
  doc["gcc"] = bcglpm::clustering_coefficient(edges.median_graph);
  if (!st.truth_path.empty()) {
    const Eigen::MatrixXi truth = bcglpm::read_truth_csv(st.truth_path);
    const bcglpm::RecoveryReport rep =
        bcglpm::recovery_metrics(edges.edge_prob, truth);
    doc["tp"] = rep.tp;
    doc["fp"] = rep.fp;
    doc["tn"] = rep.tn;
    doc["fn"] = rep.fn;
    doc["acc"] = rep.acc;
    doc["auc"] = rep.auc;
  }
  const std::string text = doc.dump(2);
  std::printf("%s\n", text.c_str());
  if (!st.report_path.empty()) {
    std::ofstream out(st.report_path);
    if (!out) throw bcglpm::validation_error("cannot write " + st.report_path);
    out << text << '\n';
  }
  return 0;
}

int run_procrustes(CliState& st) {
  json doc;
  if (!st.series_str.empty()) {
    const auto paths = split_commas(st.series_str);
    std::vector<Eigen::MatrixXd> configs;
    for (const auto& p : paths) configs.push_back(bcglpm::read_latent_csv(p).u);
    const std::vector<double> dists = bcglpm::procrustes_series(configs);
    doc["d_series"] = dists;
  } else {
    if (st.target_path.empty() || st.source_path.empty()) {
      throw bcglpm::validation_error(
          "procrustes: need --target and --source, or --series");
    }
    const auto target = bcglpm::read_latent_csv(st.target_path);
    const auto source = bcglpm::read_latent_csv(st.source_path);
    const bcglpm::ProcrustesResult res = bcglpm::procrustes(target.u, source.u);
    doc["rho"] = res.rho;
    doc["h"] = {{res.h(0, 0), res.h(0, 1)}, {res.h(1, 0), res.h(1, 1)}};
    doc["c"] = {res.c(0), res.c(1)};
    doc["d"] = res.d;
  }
  const std::string text = doc.dump(2);
  std::printf("%s\n", text.c_str());
  if (!st.report_path.empty()) {
    std::ofstream out(st.report_path);
    if (!out) throw bcglpm::validation_error("cannot write " + st.report_path);
    out << text << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian covariance graph and latent position model"};
  app.set_version_flag("--version", bcglpm::version);
  app.require_subcommand(1);
  CliState st;

  auto* sim = app.add_subcommand("simulate", "Generate planted benchmark data");
  sim->add_option("--out", st.config.out_dir, "Output directory")->required();
  sim->add_option("--n", st.sim_n, "Nodes");
  sim->add_option("--T", st.sim_t, "Sample size (default 2n)");
  sim->add_option("--setup", st.sim_setup, "lag0|lag1");
  sim->add_option("--edge-prob", st.sim_edge_prob, "Planted edge probability");
  sim->add_option("--seed", st.config.fit.seed, "RNG seed");
  sim->add_flag("--grid", st.grid_mode, "Generate the full benchmark grid");
  sim->add_option("--n-list", st.grid_n_list, "Grid: comma-separated n values");
  sim->add_option("--t-mults", st.grid_t_mults, "Grid: T multipliers of n");
  sim->add_option("--setups", st.grid_setups, "Grid: comma-separated setups");
  sim->add_option("--reps", st.grid_reps, "Grid: replications per cell");
  sim->add_option("--config", st.config_path, "Config file");

  auto* fit = app.add_subcommand("fit", "Fit one panel");
  fit->add_option("--data", st.config.input_path, "Panel CSV")->required();
  fit->add_option("--out", st.config.out_dir, "Output directory")->required();
  add_fit_options(fit, st);

  auto* roll = app.add_subcommand("rolling", "Rolling-window estimation on prices");
  roll->add_option("--prices", st.config.input_path, "Price CSV")->required();
  roll->add_option("--out", st.config.out_dir, "Output directory")->required();
  roll->add_option("--window", st.config.window_len, "Window length (trading days)");
  roll->add_option("--step", st.config.step, "Window step");
  roll->add_option("--jobs", st.config.jobs, "Concurrent window fits");
  roll->add_flag("--no-log-rv", st.no_log_rv, "Model raw realized volatility");
  add_fit_options(roll, st);

  auto* eval = app.add_subcommand("evaluate", "Score an estimated graph");
  eval->add_option("--edges", st.edges_path, "edges.csv from a fit")->required();
  eval->add_option("--truth", st.truth_path, "truth.csv sidecar");
  eval->add_option("--out", st.report_path, "Write the JSON report here");

  auto* proc = app.add_subcommand("procrustes", "Align latent configurations");
  proc->add_option("--target", st.target_path, "Target latent.csv");
  proc->add_option("--source", st.source_path, "Source latent.csv");
  proc->add_option("--series", st.series_str, "Comma-separated latent.csv files");
  proc->add_option("--out", st.report_path, "Write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(sim)) return run_simulate(st);
    if (app.got_subcommand(fit)) return run_fit(st);
    if (app.got_subcommand(roll)) return run_rolling(st);
    if (app.got_subcommand(eval)) return run_evaluate(st);
    if (app.got_subcommand(proc)) return run_procrustes(st);
  } catch (const bcglpm::validation_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const bcglpm::numeric_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 1;
  }
  return 0;
}
