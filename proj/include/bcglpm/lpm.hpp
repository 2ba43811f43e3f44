#pragma once

// Latent position model block: truncated-normal similarity update, the
// conjugate intercept and eigenvalue draws, and the Bingham-von
// Mises-Fisher column update of the orthonormal coordinates.

#include <Eigen/Dense>
#include <cmath>

#include "bcglpm/cgm.hpp"
#include "bcglpm/errors.hpp"
#include "bcglpm/normal.hpp"
#include "bcglpm/rng.hpp"
#include "bcglpm/samplers.hpp"

namespace bcglpm {

struct LpmHyper {
  double theta0 = -0.5;
  double tau_theta_sq = 100.0;
  double tau_lambda_sq = 1.0;  // the hyperparameter rule sets this to n

  void validate() const {
    if (!(tau_theta_sq > 0.0) || !(tau_lambda_sq > 0.0)) {
      throw validation_error("lpm hyper: variances must be > 0");
    }
  }
};

struct LatentState {
  Eigen::MatrixXd z;       // n x n symmetric, diagonal unused
  double theta = -0.5;
  Eigen::Vector2d lambda;  // eigenvalues
  Eigen::MatrixXd u;       // n x 2 orthonormal columns

  static LatentState init(long n, double theta0) {
    LatentState st;
    st.z = Eigen::MatrixXd::Zero(n, n);
    st.theta = theta0;
    st.lambda.setZero();
    st.u = Eigen::MatrixXd::Zero(n, 2);
    st.u(0, 0) = 1.0;
    st.u(1, 1) = 1.0;
    return st;
  }

  long n() const { return z.rows(); }

  double orthonormality_error() const {
    return (u.transpose() * u - Eigen::Matrix2d::Identity())
        .cwiseAbs()
        .maxCoeff();
  }

  // similarity matrix minus the intercept, diagonal zeroed
  Eigen::MatrixXd e_z() const {
    Eigen::MatrixXd e = z.array() - theta;
    e.diagonal().setZero();
    return e;
  }

  Eigen::MatrixXd low_rank() const {
    return u * lambda.asDiagonal() * u.transpose();
  }
};

// Link probabilities Gamma_ij = Phi(theta + (U Lambda U')_ij), clamped
// strictly inside (0,1); diagonal zeroed (no self-loops).
inline Eigen::MatrixXd link_probability(double theta,
                                        const Eigen::Vector2d& lambda,
                                        const Eigen::MatrixXd& u) {
  const long n = u.rows();
  const Eigen::MatrixXd low = u * lambda.asDiagonal() * u.transpose();
  Eigen::MatrixXd probs(n, n);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      double p = normal_cdf(theta + low(i, j));
      probs(i, j) = std::min(1.0 - kProbClamp, std::max(kProbClamp, p));
    }
  }
  probs.diagonal().setZero();
  return probs;
}

inline Eigen::MatrixXd link_probability(const LatentState& state) {
  return link_probability(state.theta, state.lambda, state.u);
}

// Z_ij ~ N(theta + (U Lambda U')_ij, 1) truncated positive iff G_ij = 1,
// mirrored to z_ji.
inline void update_z(LatentState& state, const Eigen::MatrixXi& graph,
                     RngStream& rng) {
  const long n = state.n();
  if (graph.rows() != n || graph.cols() != n) {
    throw validation_error("update_z: graph dimension mismatch");
  }
  const Eigen::MatrixXd low = state.low_rank();
  for (long i = 0; i < n; ++i) {
    for (long j = i + 1; j < n; ++j) {
      const double mean = state.theta + low(i, j);
      const TruncSign sign =
          graph(i, j) ? TruncSign::positive : TruncSign::negative;
      const double draw = sample_truncnorm(mean, sign, rng);
      state.z(i, j) = draw;
      state.z(j, i) = draw;
    }
  }
}

struct GaussianMoments {
  double mean = 0.0;
  double variance = 1.0;
};

// theta | Z, U, Lambda ~ N(v (sum_{j>i} (Z - U Lambda U')_ij + theta0/tau^2), v),
// v = 2 tau^2 / (2 + n(n-1) tau^2).
inline GaussianMoments theta_conditional(const LatentState& state,
                                         const LpmHyper& hyper) {
  const long n = state.n();
  const Eigen::MatrixXd low = state.low_rank();
  double sum = 0.0;
  for (long i = 0; i < n; ++i) {
    for (long j = i + 1; j < n; ++j) sum += state.z(i, j) - low(i, j);
  }
  const double tau2 = hyper.tau_theta_sq;
  GaussianMoments moments;
  moments.variance =
      2.0 * tau2 / (2.0 + static_cast<double>(n) * (n - 1) * tau2);
  moments.mean = moments.variance * (sum + hyper.theta0 / tau2);
  return moments;
}

inline void update_theta(LatentState& state, const LpmHyper& hyper,
                         RngStream& rng) {
  const GaussianMoments m = theta_conditional(state, hyper);
  state.theta = rng.normal(m.mean, std::sqrt(m.variance));
}

// lambda_r | Z, theta, U ~ N((tau^2/(2+tau^2)) U_r' E_z U_r, 2 tau^2/(2+tau^2)).
inline GaussianMoments lambda_conditional(const LatentState& state,
                                          const LpmHyper& hyper, int r) {
  const Eigen::MatrixXd ez = state.e_z();
  const double tau2 = hyper.tau_lambda_sq;
  GaussianMoments moments;
  moments.variance = 2.0 * tau2 / (2.0 + tau2);
  moments.mean = (tau2 / (2.0 + tau2)) * state.u.col(r).dot(ez * state.u.col(r));
  return moments;
}

inline void update_lambda(LatentState& state, const LpmHyper& hyper,
                          RngStream& rng) {
  for (int r = 0; r < 2; ++r) {
    const GaussianMoments m = lambda_conditional(state, hyper, r);
    state.lambda(r) = rng.normal(m.mean, std::sqrt(m.variance));
  }
}

namespace detail {

// Orthonormal basis of the complement of a unit vector, from the
// Householder reflector that maps it onto ±e_0.
inline Eigen::MatrixXd complement_basis(const Eigen::VectorXd& v) {
  const long n = v.size();
  const double sign = v(0) >= 0.0 ? 1.0 : -1.0;
  Eigen::VectorXd w = v;
  w(0) += sign;
  const double wtw = w.squaredNorm();
  if (!(wtw > 0.0)) {
    throw numeric_error("complement_basis: degenerate direction");
  }
  Eigen::MatrixXd reflector =
      Eigen::MatrixXd::Identity(n, n) - (2.0 / wtw) * (w * w.transpose());
  return reflector.rightCols(n - 1);
}

}  // namespace detail

// One column update, r in {0, 1}:
//   N = basis of null(U_{-r}), x = N' U_r,
//   x ~ p(x | H~) ∝ exp(x' H~ x) with H~ = Lambda_rr N' (E_z/2) N,
//   U_r = N x.
inline void update_u_column(LatentState& state, int r, RngStream& rng) {
  if (r < 0 || r > 1) throw validation_error("update_u_column: r must be 0 or 1");
  const Eigen::VectorXd other = state.u.col(1 - r);
  const Eigen::MatrixXd basis = detail::complement_basis(other);
  const Eigen::VectorXd x = basis.transpose() * state.u.col(r);
  const Eigen::MatrixXd h_tilde =
      state.lambda(r) * (basis.transpose() * (0.5 * state.e_z()) * basis);
  const Eigen::VectorXd x_new = sample_vector_bingham(h_tilde, rng, &x, 1);
  state.u.col(r) = basis * x_new;
}

// Two random-column draws per sweep, so both columns refresh in
// expectation; re-orthonormalizes via QR if drift exceeds 1e-8 and counts
// the corrections.
inline void update_u(LatentState& state, RngStream& rng,
                     long* correction_count = nullptr) {
  for (int rep = 0; rep < 2; ++rep) {
    const int r = static_cast<int>(rng.uniform_index(2));
    update_u_column(state, r, rng);
  }
  if (state.orthonormality_error() > 1e-8) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(state.u);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(state.n(), 2);
    // keep column orientation
    for (int c = 0; c < 2; ++c) {
      if (q.col(c).dot(state.u.col(c)) < 0.0) q.col(c) = -q.col(c);
    }
    state.u = q;
    if (correction_count != nullptr) ++(*correction_count);
  }
}

}  // namespace bcglpm
