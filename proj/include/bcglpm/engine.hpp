#pragma once

// Orchestration of the full Gibbs cycle: sweep composition, burn-in and
// multi-chain execution, the per-sweep likelihood score, the potential
// scale reduction factor, and posterior summarization.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "bcglpm/cgm.hpp"
#include "bcglpm/errors.hpp"
#include "bcglpm/log.hpp"
#include "bcglpm/lpm.hpp"
#include "bcglpm/metrics.hpp"
#include "bcglpm/panel.hpp"
#include "bcglpm/rng.hpp"
#include "bcglpm/var.hpp"

namespace bcglpm {

enum class ModelMode { bcglpm0, bcglpm1, sssl };

inline const char* to_string(ModelMode mode) {
  switch (mode) {
    case ModelMode::bcglpm0: return "bcglpm0";
    case ModelMode::bcglpm1: return "bcglpm1";
    default: return "sssl";
  }
}

inline ModelMode model_mode_from_string(const std::string& s) {
  if (s == "bcglpm0") return ModelMode::bcglpm0;
  if (s == "bcglpm1") return ModelMode::bcglpm1;
  if (s == "sssl") return ModelMode::sssl;
  throw validation_error("unknown mode '" + s + "' (bcglpm0|bcglpm1|sssl)");
}

inline LagMode lag_mode_of(ModelMode mode) {
  return mode == ModelMode::bcglpm1 ? LagMode::lag1 : LagMode::lag0;
}

inline bool lpm_enabled(ModelMode mode) { return mode != ModelMode::sssl; }

struct FitConfig {
  long n_iter = 10000;
  long burn_in = 3000;
  int n_chains = 2;
  ModelMode mode = ModelMode::bcglpm1;
  double v0 = 0.02;
  double h = 50.0;
  double theta0 = -0.5;
  double tau_theta_sq = 100.0;
  double tau_lambda_sq = 0.0;  // <= 0 means the default rule tau^2 = n
  std::vector<double> ridge_grid = {0.1, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 7.5, 10.0};
  double ridge_split = 0.8;
  double ridge_tol = 0.01;
  bool standardize = true;
  bool random_column_order = false;
  long thin = 10;
  std::uint64_t seed = 20190213;  // fixed default keeps default runs reproducible
  bool align_to_last = true;

  void validate() const {
    if (n_iter < 1 || burn_in < 0 || burn_in >= n_iter) {
      throw validation_error("fit config: need 0 <= burn_in < n_iter");
    }
    if (n_chains < 1) throw validation_error("fit config: need >= 1 chain");
    if (thin < 1) throw validation_error("fit config: thin must be >= 1");
    if (!(v0 > 0.0) || !(h > 1.0)) {
      throw validation_error("fit config: need v0 > 0, h > 1");
    }
  }

  LpmHyper lpm_hyper(long n) const {
    LpmHyper hyper;
    hyper.theta0 = theta0;
    hyper.tau_theta_sq = tau_theta_sq;
    hyper.tau_lambda_sq = tau_lambda_sq > 0.0 ? tau_lambda_sq
                                              : static_cast<double>(n);
    hyper.validate();
    return hyper;
  }
};

struct ChainTrace {
  std::vector<double> scores;                 // -2 log L per sweep
  Eigen::MatrixXi edge_counts;                // post burn-in inclusion counts
  std::vector<double> density_samples;        // post burn-in, per sweep
  std::vector<double> theta_samples;          // thinned
  std::vector<Eigen::Vector2d> lambda_samples;
  std::vector<Eigen::MatrixXd> u_samples;     // thinned
  Eigen::MatrixXd u_last;
  Eigen::MatrixXd u_mean_aligned;
  long retained = 0;
  long ortho_corrections = 0;
};

struct PosteriorSummary {
  Eigen::MatrixXd edge_prob;
  Eigen::MatrixXi median_graph;  // edge_prob > 0.5
  double theta_mean = 0.0;
  Eigen::Vector2d lambda_mean = Eigen::Vector2d::Zero();
  Eigen::MatrixXd u_hat;
  std::optional<double> psrf;
  double density_posterior_mean = 0.0;
  bool has_lpm = false;
};

// -2 log L: T log|Sigma| + tr(S_y|x Sigma^{-1}), plus the latent part
// tr((E_z - U Lambda U')'(E_z - U Lambda U'))/2 with the diagonal excluded.
inline double score(const CovGraphState& cov, const SufficientStats& stats) {
  const auto llt = detail::chol_sigma_jittered(cov.sigma, "score");
  return stats.t_eff * detail::log_det_from_llt(llt) +
         llt.solve(stats.s_y_given_x).trace();
}

inline double score(const CovGraphState& cov, const LatentState& latent,
                    const SufficientStats& stats) {
  const Eigen::MatrixXd resid = latent.e_z() - latent.low_rank();
  double lpm_term = 0.0;
  const long n = resid.rows();
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      if (i != j) lpm_term += resid(i, j) * resid(i, j);
    }
  }
  return score(cov, stats) + 0.5 * lpm_term;
}

struct SweepOptions {
  bool lpm = true;
  // used instead of the link probabilities when the LPM is disabled
  const Eigen::MatrixXd* fixed_edge_prior = nullptr;
  bool random_column_order = false;
};

// One full Gibbs cycle:
//   [Sigma | G, Y] (all n columns), [G | Sigma, U, Lambda, theta] with Z
//   collapsed (edge prior = link probabilities, not the current Z), then
//   [Z | G, ...], [theta | Z, ...], [Lambda | Z, theta, U], [U | Z, Lambda].
inline void gibbs_sweep(CovGraphState& cov, LatentState& latent,
                        const SufficientStats& stats, SpikeSlab& spike,
                        const LpmHyper& hyper, RngStream& rng,
                        const SweepOptions& opts = {},
                        long* ortho_corrections = nullptr) {
  const long n = cov.n();
  if (opts.random_column_order) {
    std::vector<long> order(n);
    for (long i = 0; i < n; ++i) order[i] = i;
    for (long i = n - 1; i > 0; --i) {
      std::swap(order[i], order[rng.uniform_index(i + 1)]);
    }
    for (const long i : order) update_sigma_column(cov, stats, spike, i, rng);
  } else {
    for (long i = 0; i < n; ++i) update_sigma_column(cov, stats, spike, i, rng);
  }

  if (opts.lpm) {
    const Eigen::MatrixXd gamma = link_probability(latent);
    update_graph(cov, spike, gamma, rng);
    update_z(latent, cov.graph, rng);
    update_theta(latent, hyper, rng);
    update_lambda(latent, hyper, rng);
    update_u(latent, rng, ortho_corrections);
  } else {
    if (opts.fixed_edge_prior == nullptr) {
      throw validation_error("gibbs_sweep: fixed edge prior required without LPM");
    }
    update_graph(cov, spike, *opts.fixed_edge_prior, rng);
  }
}

// Gelman-Rubin potential scale reduction factor on the per-chain score
// sequences, in the between/within variance form sqrt(1 + B/(L W)).
// Identical chains give exactly 1.
inline double psrf(const std::vector<std::vector<double>>& traces) {
  if (traces.size() < 2) {
    throw validation_error("psrf: diagnostic unavailable with a single chain");
  }
  const std::size_t len = traces.front().size();
  if (len < 100) throw validation_error("psrf: need chains of length >= 100");
  for (const auto& t : traces) {
    if (t.size() != len) throw validation_error("psrf: unequal chain lengths");
  }
  const double m = static_cast<double>(traces.size());
  const double l = static_cast<double>(len);
  std::vector<double> means;
  double within = 0.0;
  for (const auto& t : traces) {
    double mean = 0.0;
    for (const double v : t) mean += v;
    mean /= l;
    double var = 0.0;
    for (const double v : t) var += (v - mean) * (v - mean);
    var /= (l - 1.0);
    means.push_back(mean);
    within += var;
  }
  within /= m;
  double grand = 0.0;
  for (const double v : means) grand += v;
  grand /= m;
  double between_mean_var = 0.0;
  for (const double v : means) between_mean_var += (v - grand) * (v - grand);
  between_mean_var /= (m - 1.0);
  if (between_mean_var == 0.0) return 1.0;
  if (within == 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(1.0 + between_mean_var / within);
}

namespace detail {

inline ChainTrace run_chain(const SufficientStats& stats, const FitConfig& config,
                            const LpmHyper& hyper, int chain_id) {
  const long n = stats.s_yy.rows();
  RngStream rng(config.seed, static_cast<std::uint64_t>(chain_id));
  CovGraphState cov = CovGraphState::identity_init(n);
  SpikeSlab spike = SpikeSlab::make(config.v0, config.h, cov.graph);
  LatentState latent = LatentState::init(n, config.theta0);
  const bool lpm = lpm_enabled(config.mode);

  Eigen::MatrixXd fixed_prior;
  SweepOptions opts;
  opts.lpm = lpm;
  opts.random_column_order = config.random_column_order;
  if (!lpm) {
    fixed_prior = sssl_edge_prior(n);
    opts.fixed_edge_prior = &fixed_prior;
  }

#ifndef NDEBUG
  constexpr long kSpdCheckEvery = 1;
#else
  constexpr long kSpdCheckEvery = 100;
#endif

  ChainTrace trace;
  trace.scores.reserve(config.n_iter);
  trace.edge_counts = Eigen::MatrixXi::Zero(n, n);
  trace.retained = config.n_iter - config.burn_in;

  for (long sweep = 1; sweep <= config.n_iter; ++sweep) {
    gibbs_sweep(cov, latent, stats, spike, hyper, rng, opts,
                &trace.ortho_corrections);
    const double s = lpm ? score(cov, latent, stats) : score(cov, stats);
    if (!std::isfinite(s)) {
      throw numeric_error("fit: non-finite score at sweep " +
                          std::to_string(sweep));
    }
    trace.scores.push_back(s);
    if (sweep % kSpdCheckEvery == 0 && !cov.sigma_is_spd()) {
      throw numeric_error("fit: sigma lost positive definiteness at sweep " +
                          std::to_string(sweep));
    }
    if (sweep > config.burn_in) {
      trace.edge_counts += cov.graph;
      trace.density_samples.push_back(network_density(cov.graph));
      if ((sweep - config.burn_in - 1) % config.thin == 0 && lpm) {
        trace.theta_samples.push_back(latent.theta);
        trace.lambda_samples.push_back(latent.lambda);
        trace.u_samples.push_back(latent.u);
      }
    }
  }

  if (lpm) {
    trace.u_last = latent.u;
    const Eigen::MatrixXd& target =
        config.align_to_last ? trace.u_last : trace.u_samples.front();
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, 2);
    for (const auto& u : trace.u_samples) {
      mean += procrustes(target, u).transformed;
    }
    mean /= static_cast<double>(trace.u_samples.size());
    trace.u_mean_aligned = mean;
  }
  return trace;
}

}  // namespace detail

struct FitResult {
  PosteriorSummary summary;
  std::vector<ChainTrace> traces;
  RidgeChoice ridge;
  SufficientStats stats;
};

// Full pipeline on one panel: standardization, shrinkage selection,
// sufficient statistics, independent chains, posterior aggregation.
// Partial results are never emitted on error.
inline FitResult fit(const TimeSeriesPanel& panel, const FitConfig& config) {
  config.validate();
  panel.validate();
  const TimeSeriesPanel working = config.standardize ? standardize(panel) : panel;
  const LagMode lag = lag_mode_of(config.mode);

  FitResult result;
  double eta = 0.0;
  if (lag == LagMode::lag1) {
    result.ridge = select_ridge(working, lag, config.ridge_grid,
                                config.ridge_split, config.ridge_tol);
    eta = result.ridge.eta;
  }
  const LaggedDesign design = build_lagged_design(working, lag);
  result.stats = compute_suffstats(design.y_eff, design.x, Eigen::MatrixXd(), eta);
  const long n = result.stats.s_yy.rows();
  const LpmHyper hyper = config.lpm_hyper(n);

  std::vector<std::future<ChainTrace>> futures;
  futures.reserve(config.n_chains);
  for (int c = 0; c < config.n_chains; ++c) {
    futures.push_back(std::async(std::launch::async, [&, c] {
      return detail::run_chain(result.stats, config, hyper, c);
    }));
  }
  for (auto& f : futures) result.traces.push_back(f.get());

  PosteriorSummary& summary = result.summary;
  summary.has_lpm = lpm_enabled(config.mode);
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(n, n);
  long retained_total = 0;
  double density_sum = 0.0;
  long density_count = 0;
  double theta_sum = 0.0;
  long theta_count = 0;
  Eigen::Vector2d lambda_sum = Eigen::Vector2d::Zero();
  for (const auto& trace : result.traces) {
    counts += trace.edge_counts;
    retained_total += trace.retained;
    for (const double d : trace.density_samples) density_sum += d;
    density_count += static_cast<long>(trace.density_samples.size());
    for (const double t : trace.theta_samples) theta_sum += t;
    theta_count += static_cast<long>(trace.theta_samples.size());
    for (const auto& l : trace.lambda_samples) lambda_sum += l;
  }
  summary.edge_prob = counts.cast<double>() / static_cast<double>(retained_total);
  summary.median_graph =
      (summary.edge_prob.array() > 0.5).cast<int>().matrix();
  summary.density_posterior_mean = density_sum / density_count;
  if (summary.has_lpm && theta_count > 0) {
    summary.theta_mean = theta_sum / theta_count;
    summary.lambda_mean = lambda_sum / static_cast<double>(theta_count);
    // cross-chain mean of the per-chain aligned means, re-aligned to the
    // first chain's target
    const Eigen::MatrixXd& target = result.traces.front().u_mean_aligned;
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, 2);
    for (const auto& trace : result.traces) {
      acc += procrustes(target, trace.u_mean_aligned).transformed;
    }
    summary.u_hat = acc / static_cast<double>(result.traces.size());
  }

  if (config.n_chains >= 2) {
    const long retained = config.n_iter - config.burn_in;
    if (retained >= 100) {
      std::vector<std::vector<double>> post;
      for (const auto& trace : result.traces) {
        post.emplace_back(trace.scores.begin() + config.burn_in,
                          trace.scores.end());
      }
      summary.psrf = psrf(post);
    } else {
      log_warn("fit: retained sample too short for PSRF");
    }
  }
  return result;
}

}  // namespace bcglpm
