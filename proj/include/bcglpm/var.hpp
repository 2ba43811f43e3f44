#pragma once

// VAR layer: lagged design matrices, the sufficient statistics behind the
// marginal likelihood, ridge-style shrinkage selection, and the implied
// structural decomposition of a covariance matrix.

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "bcglpm/errors.hpp"
#include "bcglpm/log.hpp"
#include "bcglpm/panel.hpp"

namespace bcglpm {

enum class LagMode { lag0, lag1 };

inline const char* to_string(LagMode mode) {
  return mode == LagMode::lag0 ? "lag0" : "lag1";
}

struct LaggedDesign {
  Eigen::MatrixXd y_eff;  // T_eff x n
  Eigen::MatrixXd x;      // T_eff x k
};

// lag1: X_t = (Y_{t-1}, M_{t-1})', k = n + m, T_eff = T - 1.
// lag0: X empty, k = 0, T_eff = T.
inline LaggedDesign build_lagged_design(const TimeSeriesPanel& panel,
                                        LagMode mode) {
  panel.validate();
  const long t = panel.rows();
  LaggedDesign out;
  if (mode == LagMode::lag0) {
    out.y_eff = panel.y;
    out.x = Eigen::MatrixXd(t, 0);
    return out;
  }
  if (t < 2) throw validation_error("build_lagged_design: lag1 requires T >= 2");
  const long n = panel.n_series();
  const long m = panel.n_market();
  out.y_eff = panel.y.bottomRows(t - 1);
  out.x.resize(t - 1, n + m);
  out.x.leftCols(n) = panel.y.topRows(t - 1);
  if (m > 0) out.x.rightCols(m) = panel.m.topRows(t - 1);
  return out;
}

struct SufficientStats {
  Eigen::MatrixXd s_xx;         // k x k
  Eigen::MatrixXd s_yx;         // n x k
  Eigen::MatrixXd s_yy;         // n x n
  Eigen::MatrixXd s_y_given_x;  // n x n
  long t_eff = 0;
  long k = 0;
  double eta = 0.0;
};

namespace detail {

inline double min_ldlt_pivot(const Eigen::MatrixXd& m) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
  return ldlt.vectorD().minCoeff();
}

inline Eigen::LLT<Eigen::MatrixXd> chol_or_throw(const Eigen::MatrixXd& m,
                                                 const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw numeric_error(std::string(what) +
                        ": matrix not positive definite (smallest pivot " +
                        std::to_string(min_ldlt_pivot(m)) + ")");
  }
  return llt;
}

// Factor sigma; on failure add a one-shot diagonal jitter of
// 1e-10 * trace/n and retry, then hard error.  Rolling financial windows
// occasionally produce near-singular statistics.
inline Eigen::LLT<Eigen::MatrixXd> chol_sigma_jittered(
    const Eigen::MatrixXd& sigma, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() == Eigen::Success) return llt;
  const double jitter = 1e-10 * sigma.trace() / sigma.rows();
  log_warn(std::string(what) + ": factorization failed, retrying with jitter " +
           std::to_string(jitter));
  Eigen::MatrixXd bumped = sigma;
  bumped.diagonal().array() += jitter;
  llt.compute(bumped);
  if (llt.info() != Eigen::Success) {
    throw numeric_error(std::string(what) +
                        ": sigma not positive definite even after jitter");
  }
  return llt;
}

inline double log_det_from_llt(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace detail

// S_xx = X'X + eta I, S_yx = Y'X + eta A0, S_yy = Y'Y + eta A0 A0',
// S_y|x = S_yy - S_yx S_xx^{-1} S_yx' (Schur complement via Cholesky,
// never an explicit inverse).
inline SufficientStats compute_suffstats(const Eigen::MatrixXd& y_eff,
                                         const Eigen::MatrixXd& x,
                                         const Eigen::MatrixXd& prior_mean_a,
                                         double eta) {
  const long k = x.cols();
  SufficientStats st;
  st.t_eff = y_eff.rows();
  st.k = k;
  st.eta = eta;
  st.s_yy = y_eff.transpose() * y_eff;
  if (k == 0) {
    st.s_xx = Eigen::MatrixXd(0, 0);
    st.s_yx = Eigen::MatrixXd(y_eff.cols(), 0);
    st.s_y_given_x = st.s_yy;
    return st;
  }
  if (!(eta > 0.0)) {
    throw validation_error("compute_suffstats: eta must be > 0 when k > 0");
  }
  if (prior_mean_a.size() != 0 &&
      (prior_mean_a.rows() != y_eff.cols() || prior_mean_a.cols() != k)) {
    throw validation_error("compute_suffstats: prior mean must be n x k");
  }
  st.s_xx = x.transpose() * x;
  st.s_xx.diagonal().array() += eta;
  st.s_yx = y_eff.transpose() * x;
  if (prior_mean_a.size() != 0) {
    st.s_yx += eta * prior_mean_a;
    st.s_yy += eta * prior_mean_a * prior_mean_a.transpose();
  }
  const auto llt = detail::chol_or_throw(st.s_xx, "compute_suffstats");
  // S_yx S_xx^{-1} S_yx' through the factor: L^{-1} S_yx' is k x n
  const Eigen::MatrixXd half =
      llt.matrixL().solve(st.s_yx.transpose());
  st.s_y_given_x = st.s_yy - half.transpose() * half;
  st.s_y_given_x = 0.5 * (st.s_y_given_x + st.s_y_given_x.transpose());
  return st;
}

// Full-constant log marginal likelihood of Y given sigma:
//   -(n T/2) log 2pi - (n/2) log|Psi| - (n/2) log|S_xx|
//   - (T/2) log|Sigma| - tr(Sigma^{-1} S_y|x)/2,  Psi = eta^{-1} I_k.
// The Psi and S_xx terms vanish when k = 0.
inline double log_marginal_likelihood(const SufficientStats& stats,
                                      const Eigen::MatrixXd& sigma) {
  const long n = stats.s_yy.rows();
  if (sigma.rows() != n || sigma.cols() != n) {
    throw validation_error("log_marginal_likelihood: sigma dimension mismatch");
  }
  const auto llt = detail::chol_sigma_jittered(sigma, "log_marginal_likelihood");
  double value = -0.5 * n * stats.t_eff * std::log(2.0 * M_PI) -
                 0.5 * stats.t_eff * detail::log_det_from_llt(llt) -
                 0.5 * llt.solve(stats.s_y_given_x).trace();
  if (stats.k > 0) {
    const double log_det_psi = -stats.k * std::log(stats.eta);
    const auto llt_xx = detail::chol_or_throw(stats.s_xx, "log_marginal_likelihood");
    value += -0.5 * n * log_det_psi - 0.5 * n * detail::log_det_from_llt(llt_xx);
  }
  return value;
}

// Posterior mean of A: S_yx S_xx^{-1}, solved through the factorization.
inline Eigen::MatrixXd posterior_mean_A(const SufficientStats& stats) {
  if (stats.k == 0) return Eigen::MatrixXd(stats.s_yy.rows(), 0);
  const auto llt = detail::chol_or_throw(stats.s_xx, "posterior_mean_A");
  return llt.solve(stats.s_yx.transpose()).transpose();
}

struct RidgeChoice {
  double c0 = 0.0;
  double eta = 0.0;
  std::vector<std::pair<double, double>> msfe_curve;  // (c0, msfe)
};

// Grid search for the shrinkage constant: fit the posterior-mean
// coefficients on the first split*T_eff rows, score one-step MSFE on the
// remainder, and take the smallest c0 whose successive MSFE first
// difference falls below tol.  Midpoint fallback when the curve never
// flattens.
inline RidgeChoice select_ridge(const TimeSeriesPanel& panel, LagMode mode,
                                const std::vector<double>& grid,
                                double split = 0.8, double tol = 0.01) {
  if (grid.empty()) throw validation_error("select_ridge: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw validation_error("select_ridge: grid must be strictly ascending");
    }
  }
  if (!(split > 0.0 && split < 1.0)) {
    throw validation_error("select_ridge: split must lie in (0,1)");
  }
  const LaggedDesign design = build_lagged_design(panel, mode);
  const long t_eff = design.y_eff.rows();
  const long k = design.x.cols();
  const long n_fit = static_cast<long>(std::floor(split * t_eff));
  const long n_hold = t_eff - n_fit;
  if (n_fit < 1 || n_hold < 1) {
    throw validation_error("select_ridge: holdout shorter than 1 row");
  }
  const Eigen::MatrixXd y_fit = design.y_eff.topRows(n_fit);
  const Eigen::MatrixXd x_fit = design.x.topRows(n_fit);
  const Eigen::MatrixXd y_hold = design.y_eff.bottomRows(n_hold);
  const Eigen::MatrixXd x_hold = design.x.bottomRows(n_hold);

  RidgeChoice choice;
  for (const double c0 : grid) {
    double msfe;
    if (k == 0) {
      msfe = y_hold.array().square().mean();
    } else {
      const double eta = c0 * k;
      const SufficientStats st = compute_suffstats(
          y_fit, x_fit, Eigen::MatrixXd(), eta);
      const Eigen::MatrixXd a_hat = posterior_mean_A(st);  // n x k
      msfe = (y_hold - x_hold * a_hat.transpose()).array().square().mean();
    }
    choice.msfe_curve.emplace_back(c0, msfe);
  }

  auto finish = [&](double c0) {
    choice.c0 = c0;
    choice.eta = c0 * k;
    return choice;
  };
  if (grid.size() == 1) return finish(grid[0]);
  for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
    const double diff =
        choice.msfe_curve[j + 1].second - choice.msfe_curve[j].second;
    if (std::fabs(diff) < tol) return finish(grid[j]);
  }
  return finish(grid[grid.size() / 2]);
}

struct StructuralDecomposition {
  Eigen::MatrixXd b;  // n x n, row i nonzero only on parents(i)
  Eigen::VectorXd q;  // conditional variances
};

// B_{i,pi_i} = Sigma_{i,pi} Sigma_{pi,pi}^{-1};
// Q_ii = Sigma_ii - Sigma_{i,pi} Sigma_{pi,pi}^{-1} Sigma_{i,pi}'.
inline StructuralDecomposition structural_decomposition(
    const Eigen::MatrixXd& sigma,
    const std::vector<std::vector<long>>& parents) {
  const long n = sigma.rows();
  if (sigma.cols() != n) {
    throw validation_error("structural_decomposition: sigma must be square");
  }
  if (static_cast<long>(parents.size()) != n) {
    throw validation_error("structural_decomposition: need a parent set per node");
  }
  StructuralDecomposition out;
  out.b = Eigen::MatrixXd::Zero(n, n);
  out.q.resize(n);
  for (long i = 0; i < n; ++i) {
    const auto& pi = parents[i];
    for (const long j : pi) {
      if (j < 0 || j >= n || j == i) {
        throw validation_error("structural_decomposition: invalid parent index");
      }
    }
    const long p = static_cast<long>(pi.size());
    if (p == 0) {
      out.q(i) = sigma(i, i);
      continue;
    }
    Eigen::MatrixXd spp(p, p);
    Eigen::VectorXd sip(p);
    for (long r = 0; r < p; ++r) {
      sip(r) = sigma(i, pi[r]);
      for (long c = 0; c < p; ++c) spp(r, c) = sigma(pi[r], pi[c]);
    }
    const auto llt = detail::chol_or_throw(spp, "structural_decomposition");
    const Eigen::VectorXd coef = llt.solve(sip);
    for (long r = 0; r < p; ++r) out.b(i, pi[r]) = coef(r);
    out.q(i) = sigma(i, i) - sip.dot(coef);
  }
  return out;
}

}  // namespace bcglpm
