#pragma once

// Synthetic benchmark data: sparse planted graphs with covariance
// Sigma_G = B_G + delta I, and the contemporaneous / AR(1) setups.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>

#include "bcglpm/errors.hpp"
#include "bcglpm/rng.hpp"
#include "bcglpm/var.hpp"

namespace bcglpm {

struct DgpSpec {
  long n = 50;
  long t = 100;
  LagMode setup = LagMode::lag0;
  double edge_prob = 0.2;
  double coef_lo = 0.3;
  double coef_hi = 0.9;
  std::uint64_t seed = 1;
  long discard = 0;  // optional AR burn-in rows to drop (sensitivity runs)

  void validate() const {
    if (n < 2 || t < 1) throw validation_error("dgp: need n >= 2, T >= 1");
    if (!(edge_prob > 0.0 && edge_prob < 1.0)) {
      throw validation_error("dgp: edge_prob must lie in (0,1)");
    }
    if (!(0.0 < coef_lo && coef_lo < coef_hi)) {
      throw validation_error("dgp: need 0 < coef_lo < coef_hi");
    }
    if (discard < 0) throw validation_error("dgp: discard must be >= 0");
  }
};

struct PlantedInstance {
  Eigen::MatrixXd data;        // T x n
  Eigen::MatrixXi true_graph;  // binary symmetric
  Eigen::MatrixXd sigma_true;  // zeros exactly on non-edges
  Eigen::VectorXd a_true;      // AR diagonal, empty for lag0
};

namespace detail {

inline double signed_uniform_coef(double lo, double hi, RngStream& rng) {
  const double mag = lo + (hi - lo) * rng.uniform();
  return rng.bernoulli(0.5) ? mag : -mag;
}

}  // namespace detail

// G ~ iid Bernoulli(edge_prob) on i<j; B_G symmetric with unit diagonal
// and signed-uniform entries on edges; delta = (n min(d) - max(d))/(1-n)
// over the eigenvalues d of B_G, which puts the smallest eigenvalue of
// Sigma_G at (max - min)/(n-1) > 0.  The measure-zero case of all-equal
// eigenvalues is re-rolled with a fresh B_G.
inline PlantedInstance generate(const DgpSpec& spec) {
  spec.validate();
  RngStream rng(spec.seed, 0);
  const long n = spec.n;
  PlantedInstance inst;

  for (;;) {
    inst.true_graph = Eigen::MatrixXi::Zero(n, n);
    Eigen::MatrixXd b = Eigen::MatrixXd::Identity(n, n);
    for (long i = 0; i < n; ++i) {
      for (long j = i + 1; j < n; ++j) {
        if (rng.bernoulli(spec.edge_prob)) {
          inst.true_graph(i, j) = 1;
          inst.true_graph(j, i) = 1;
          const double beta =
              detail::signed_uniform_coef(spec.coef_lo, spec.coef_hi, rng);
          b(i, j) = beta;
          b(j, i) = beta;
        }
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (hi - lo < 1e-12) continue;
    const double delta = (n * lo - hi) / (1.0 - n);
    inst.sigma_true = b;
    inst.sigma_true.diagonal().array() += delta;
    break;
  }

  const Eigen::LLT<Eigen::MatrixXd> llt(inst.sigma_true);
  if (llt.info() != Eigen::Success) {
    throw numeric_error("dgp: planted covariance not positive definite");
  }
  const Eigen::MatrixXd chol_l = llt.matrixL();

  auto draw_shock = [&](Eigen::VectorXd& e) {
    for (long i = 0; i < n; ++i) e(i) = rng.normal();
    e = chol_l * e;
  };

  if (spec.setup == LagMode::lag0) {
    inst.data.resize(spec.t, n);
    Eigen::VectorXd e(n);
    for (long t = 0; t < spec.t; ++t) {
      draw_shock(e);
      inst.data.row(t) = e.transpose();
    }
    return inst;
  }

  inst.a_true.resize(n);
  for (long i = 0; i < n; ++i) {
    inst.a_true(i) = detail::signed_uniform_coef(spec.coef_lo, spec.coef_hi, rng);
  }
  Eigen::VectorXd prev(n);
  for (long i = 0; i < n; ++i) prev(i) = rng.normal();  // Y_0 ~ N(0, I)
  inst.data.resize(spec.t, n);
  Eigen::VectorXd e(n);
  const long total = spec.t + spec.discard;
  long row = 0;
  for (long t = 0; t < total; ++t) {
    draw_shock(e);
    prev = inst.a_true.asDiagonal() * prev + e;
    if (t >= spec.discard) inst.data.row(row++) = prev.transpose();
  }
  return inst;
}

}  // namespace bcglpm
