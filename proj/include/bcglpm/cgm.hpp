#pragma once

// Covariance graphical model block: column-wise Gibbs update of the
// covariance matrix under the spike-and-slab prior, and the per-edge
// Bernoulli update of the graph.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <string>

#include "bcglpm/errors.hpp"
#include "bcglpm/log.hpp"
#include "bcglpm/rng.hpp"
#include "bcglpm/samplers.hpp"
#include "bcglpm/var.hpp"

namespace bcglpm {

inline constexpr double kProbClamp = 1e-12;

struct CovGraphState {
  Eigen::MatrixXd sigma;  // n x n symmetric positive definite
  Eigen::MatrixXi graph;  // n x n binary symmetric, zero diagonal

  static CovGraphState identity_init(long n) {
    CovGraphState st;
    st.sigma = Eigen::MatrixXd::Identity(n, n);
    st.graph = Eigen::MatrixXi::Zero(n, n);
    return st;
  }

  long n() const { return sigma.rows(); }

  bool sigma_is_spd() const {
    return Eigen::LLT<Eigen::MatrixXd>(sigma).info() == Eigen::Success;
  }

  bool graph_is_valid() const {
    if (graph.diagonal().any()) return false;
    return graph == graph.transpose().eval();
  }
};

// Spike (v0) and slab (v1 = h v0) standard deviations plus the mixing
// matrix V implied by the current graph: V_ii = 1, V_ij = v0^2 or v1^2.
struct SpikeSlab {
  double v0 = 0.02;
  double h = 50.0;
  Eigen::MatrixXd v;

  double v1() const { return h * v0; }

  static SpikeSlab make(double v0, double h, const Eigen::MatrixXi& graph) {
    if (!(v0 > 0.0) || !(h > 1.0)) {
      throw validation_error("spike-slab: need v0 > 0 and h > 1");
    }
    SpikeSlab s;
    s.v0 = v0;
    s.h = h;
    s.refresh(graph);
    return s;
  }

  void refresh(const Eigen::MatrixXi& graph) {
    const long n = graph.rows();
    const double spike2 = v0 * v0;
    const double slab2 = v1() * v1();
    v.resize(n, n);
    for (long i = 0; i < n; ++i) {
      for (long j = 0; j < n; ++j) {
        v(i, j) = (i == j) ? 1.0 : (graph(i, j) ? slab2 : spike2);
      }
    }
  }
};

// One column/row block update of sigma: with the partition at node i,
//   gamma | mu ~ GIG(1 - T/2, v_ii, mu' W_s mu - 2 s' Sinv mu + s_ii)
//   mu | gamma ~ N(W^{-1} Sinv s / gamma, W^{-1}),
//   W = Sinv S_-i Sinv / gamma + v_ii Sinv + D_v^{-1},  Sinv = Sigma_-i^{-1}.
// Writes sigma_-i = mu and sigma_ii = gamma + mu' Sinv mu, which keeps
// sigma positive definite for any gamma > 0.
inline void update_sigma_column(CovGraphState& state,
                                const SufficientStats& stats,
                                const SpikeSlab& spike, long i,
                                RngStream& rng) {
  const long n = state.n();
  if (i < 0 || i >= n) throw validation_error("update_sigma_column: bad index");
  const long m = n - 1;

  // gather the partition at i
  Eigen::MatrixXd sigma_rest(m, m);
  Eigen::VectorXd mu(m), s_rest(m), v_rest(m);
  {
    long r = 0;
    for (long a = 0; a < n; ++a) {
      if (a == i) continue;
      mu(r) = state.sigma(a, i);
      s_rest(r) = stats.s_y_given_x(a, i);
      v_rest(r) = spike.v(a, i);
      long c = 0;
      for (long b = 0; b < n; ++b) {
        if (b == i) continue;
        sigma_rest(r, c) = state.sigma(a, b);
        ++c;
      }
      ++r;
    }
  }
  const double s_ii = stats.s_y_given_x(i, i);
  const double v_ii = spike.v(i, i);

  Eigen::MatrixXd s_block(m, m);
  {
    long r = 0;
    for (long a = 0; a < n; ++a) {
      if (a == i) continue;
      long c = 0;
      for (long b = 0; b < n; ++b) {
        if (b == i) continue;
        s_block(r, c) = stats.s_y_given_x(a, b);
        ++c;
      }
      ++r;
    }
  }
  const auto llt = detail::chol_or_throw(sigma_rest, "update_sigma_column");
  const Eigen::MatrixXd sig_inv =
      llt.solve(Eigen::MatrixXd::Identity(m, m));
  const Eigen::MatrixXd w_s = sig_inv * s_block * sig_inv;

  const Eigen::VectorXd sinv_mu = sig_inv * mu;
  const Eigen::VectorXd sinv_s = sig_inv * s_rest;
  double b = mu.dot(w_s * mu) - 2.0 * s_rest.dot(sinv_mu) + s_ii;
  if (!(b > 0.0)) {
    // analytically a positive definite quadratic form; numerical
    // cancellation can push it to <= 0
    const double clamped =
        std::numeric_limits<double>::epsilon() * std::fabs(s_ii);
    log_warn("update_sigma_column: GIG b = " + std::to_string(b) +
             " clamped to " + std::to_string(clamped));
    b = clamped;
  }
  const double q_order = 1.0 - 0.5 * static_cast<double>(stats.t_eff);
  const double gamma = sample_gig({q_order, v_ii, b}, rng);

  Eigen::MatrixXd w = w_s / gamma + v_ii * sig_inv;
  w.diagonal() += v_rest.cwiseInverse();
  const auto llt_w = detail::chol_or_throw(w, "update_sigma_column (W)");
  Eigen::VectorXd mu_new = llt_w.solve(sinv_s / gamma);
  {
    Eigen::VectorXd z(m);
    for (long r = 0; r < m; ++r) z(r) = rng.normal();
    mu_new += llt_w.matrixU().solve(z);
  }

  // scatter back
  {
    long r = 0;
    for (long a = 0; a < n; ++a) {
      if (a == i) continue;
      state.sigma(a, i) = mu_new(r);
      state.sigma(i, a) = mu_new(r);
      ++r;
    }
  }
  state.sigma(i, i) = gamma + mu_new.dot(sig_inv * mu_new);
}

// Conditional inclusion probability of one edge,
//   b1/(b1+b2), b1 = Gamma/v1 exp(-s^2/(2 v1^2)),
//               b2 = (1-Gamma)/v0 exp(-s^2/(2 v0^2)),
// computed in log space so the spike density can underflow safely.
inline double edge_inclusion_probability(double sigma_ij, double edge_prior,
                                         const SpikeSlab& spike) {
  const double prior =
      std::min(1.0 - kProbClamp, std::max(kProbClamp, edge_prior));
  const double v0 = spike.v0;
  const double v1 = spike.v1();
  const double s2 = sigma_ij * sigma_ij;
  const double log_b1 = std::log(prior) - std::log(v1) - s2 / (2.0 * v1 * v1);
  const double log_b2 =
      std::log1p(-prior) - std::log(v0) - s2 / (2.0 * v0 * v0);
  return 1.0 / (1.0 + std::exp(log_b2 - log_b1));
}

// Per-edge Bernoulli update of G given sigma and the edge prior;
// refreshes V from the new graph.
inline void update_graph(CovGraphState& state, SpikeSlab& spike,
                         const Eigen::MatrixXd& edge_probs, RngStream& rng) {
  const long n = state.n();
  if (edge_probs.rows() != n || edge_probs.cols() != n) {
    throw validation_error("update_graph: edge prior dimension mismatch");
  }
  for (long i = 0; i < n; ++i) {
    for (long j = i + 1; j < n; ++j) {
      const double p =
          edge_inclusion_probability(state.sigma(i, j), edge_probs(i, j), spike);
      const int edge = rng.bernoulli(p) ? 1 : 0;
      state.graph(i, j) = edge;
      state.graph(j, i) = edge;
    }
  }
  spike.refresh(state.graph);
}

// Constant SSSL edge prior pi = 2/(n-1), clamped into (0, 1).
inline Eigen::MatrixXd sssl_edge_prior(long n) {
  if (n < 2) throw validation_error("sssl_edge_prior: need n >= 2");
  double pi = 2.0 / static_cast<double>(n - 1);
  pi = std::min(1.0 - kProbClamp, std::max(kProbClamp, pi));
  Eigen::MatrixXd probs = Eigen::MatrixXd::Constant(n, n, pi);
  probs.diagonal().setZero();
  return probs;
}

}  // namespace bcglpm
