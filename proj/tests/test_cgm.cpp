#include <catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>

#include "bcglpm/cgm.hpp"
#include "bcglpm/var.hpp"
#include "oracles.hpp"

using namespace bcglpm;

namespace {

SufficientStats stats_from_data(const Eigen::MatrixXd& y) {
  return compute_suffstats(y, Eigen::MatrixXd(y.rows(), 0), Eigen::MatrixXd(),
                           0.0);
}

Eigen::MatrixXd correlated_pair_data(long t, double rho, RngStream& rng) {
  Eigen::MatrixXd y(t, 2);
  const double w = std::sqrt(1.0 - rho * rho);
  for (long i = 0; i < t; ++i) {
    const double a = rng.normal(), b = rng.normal();
    y(i, 0) = a;
    y(i, 1) = rho * a + w * b;
  }
  return y;
}

}  // namespace

TEST_CASE("sssl edge prior values") {
  REQUIRE(sssl_edge_prior(3)(0, 1) == Catch::Approx(1.0 - 1e-12));
  REQUIRE(sssl_edge_prior(100)(0, 1) == Catch::Approx(2.0 / 99.0));
  REQUIRE(sssl_edge_prior(11)(0, 1) == Catch::Approx(0.2));
  REQUIRE(sssl_edge_prior(5)(2, 2) == 0.0);
  REQUIRE_THROWS_AS(sssl_edge_prior(1), validation_error);
}

TEST_CASE("edge inclusion probability plug-in") {
  CovGraphState st = CovGraphState::identity_init(2);
  const SpikeSlab spike = SpikeSlab::make(0.02, 50.0, st.graph);  // v1 = 1
  // sigma_ij = 0, Gamma = 0.5: odds = (1/v1)/(1/v0) = 0.02
  REQUIRE(edge_inclusion_probability(0.0, 0.5, spike) ==
          Catch::Approx(0.02 / 1.02).epsilon(1e-12));
  // prior dominance
  REQUIRE(edge_inclusion_probability(0.0, 1.0 - 1e-13, spike) >
          1.0 - 1e-9);
  // spike underflow regime: the slab wins outright
  REQUIRE(edge_inclusion_probability(1.2, 0.5, spike) >= 1.0 - 1e-12);
  REQUIRE(edge_inclusion_probability(0.5, 0.5, spike) >= 1.0 - 1e-12);
}

TEST_CASE("edge inclusion probability matches long-double direct evaluation") {
  CovGraphState st = CovGraphState::identity_init(2);
  const SpikeSlab spike = SpikeSlab::make(0.05, 20.0, st.graph);
  for (const double s : {0.0, 0.03, 0.08, 0.2, 0.4}) {
    for (const double g : {0.1, 0.5, 0.9}) {
      const long double v0 = 0.05L, v1 = 1.0L;
      const long double b1 = g / v1 * std::exp(-(long double)(s * s) / (2 * v1 * v1));
      const long double b2 =
          (1.0L - g) / v0 * std::exp(-(long double)(s * s) / (2 * v0 * v0));
      const double direct = static_cast<double>(b1 / (b1 + b2));
      REQUIRE(edge_inclusion_probability(s, g, spike) ==
              Catch::Approx(direct).epsilon(1e-10));
    }
  }
}

TEST_CASE("spike-slab validation and V refresh") {
  CovGraphState st = CovGraphState::identity_init(3);
  REQUIRE_THROWS_AS(SpikeSlab::make(0.0, 50.0, st.graph), validation_error);
  REQUIRE_THROWS_AS(SpikeSlab::make(0.1, 1.0, st.graph), validation_error);
  SpikeSlab spike = SpikeSlab::make(0.02, 50.0, st.graph);
  REQUIRE(spike.v(0, 0) == 1.0);
  REQUIRE(spike.v(0, 1) == Catch::Approx(0.02 * 0.02));
  st.graph(0, 1) = st.graph(1, 0) = 1;
  spike.refresh(st.graph);
  REQUIRE(spike.v(0, 1) == Catch::Approx(1.0));
  REQUIRE(spike.v(1, 2) == Catch::Approx(0.0004));
}

TEST_CASE("column updates preserve positive definiteness and symmetry") {
  RngStream rng(301, 0);
  const long n = 5, t = 80;
  Eigen::MatrixXd y(t, n);
  for (long i = 0; i < t; ++i) {
    for (long j = 0; j < n; ++j) y(i, j) = rng.normal();
  }
  const auto st = stats_from_data(y);
  CovGraphState state = CovGraphState::identity_init(n);
  SpikeSlab spike = SpikeSlab::make(0.02, 50.0, state.graph);
  const Eigen::MatrixXd probs = sssl_edge_prior(n);
  for (int sweep = 0; sweep < 300; ++sweep) {
    for (long i = 0; i < n; ++i) update_sigma_column(state, st, spike, i, rng);
    update_graph(state, spike, probs, rng);
    REQUIRE(state.sigma_is_spd());
    REQUIRE(state.graph_is_valid());
    REQUIRE((state.sigma - state.sigma.transpose()).cwiseAbs().maxCoeff() <
            1e-12);
  }
}

TEST_CASE("n=2 sigma gibbs matches the metropolis oracle with fixed graph") {
  RngStream drng(302, 0);
  const long t = 60;
  const Eigen::MatrixXd y = correlated_pair_data(t, 0.6, drng);
  const auto st = stats_from_data(y);
  const double v0 = 0.1, h = 10.0, v1 = 1.0;

  // target with G fixed to the slab edge (the within-column density)
  auto log_target = [&](double s11, double s22, double s12) {
    const double det = s11 * s22 - s12 * s12;
    if (s11 <= 0.0 || s22 <= 0.0 || det <= 0.0) return -1e300;
    const double tri = (st.s_y_given_x(0, 0) * s22 -
                        2.0 * st.s_y_given_x(0, 1) * s12 +
                        st.s_y_given_x(1, 1) * s11) /
                       det;
    return -0.5 * t * std::log(det) - 0.5 * tri - 0.5 * s11 - 0.5 * s22 -
           0.5 * s12 * s12 / (v1 * v1);
  };
  RngStream mrng(303, 0);
  const double sc1 = st.s_y_given_x(0, 0) / t, sc2 = st.s_y_given_x(1, 1) / t;
  const double sc12 = 0.8 * std::sqrt(sc1 * sc2);
  auto propose = [&](double& s11, double& s22, double& s12, double& logq) {
    const double z1 = mrng.normal(), z2 = mrng.normal(), z3 = mrng.normal();
    s11 = sc1 * std::exp(0.7 * z1);
    s22 = sc2 * std::exp(0.7 * z2);
    s12 = sc12 * z3;
    logq = -0.5 * (z1 * z1 + z2 * z2 + z3 * z3) - std::log(s11) - std::log(s22);
  };
  double c11, c22, c12, clq;
  propose(c11, c22, c12, clq);
  double clt = log_target(c11, c22, c12);
  double m11 = 0, m22 = 0, m12 = 0;
  const long iters = 2000000;
  for (long it = 0; it < iters; ++it) {
    double p11, p22, p12, plq;
    propose(p11, p22, p12, plq);
    const double plt = log_target(p11, p22, p12);
    if (std::log(mrng.uniform()) < (plt - clt) - (plq - clq)) {
      c11 = p11; c22 = p22; c12 = p12; clt = plt; clq = plq;
    }
    m11 += c11; m22 += c22; m12 += c12;
  }
  m11 /= iters; m22 /= iters; m12 /= iters;

  RngStream grng(304, 0);
  CovGraphState state = CovGraphState::identity_init(2);
  state.graph(0, 1) = state.graph(1, 0) = 1;
  SpikeSlab spike = SpikeSlab::make(v0, h, state.graph);
  double g11 = 0, g22 = 0, g12 = 0;
  const long sweeps = 300000, burn = 10000;
  for (long it = 0; it < sweeps + burn; ++it) {
    update_sigma_column(state, st, spike, 0, grng);
    update_sigma_column(state, st, spike, 1, grng);
    if (it >= burn) {
      g11 += state.sigma(0, 0);
      g22 += state.sigma(1, 1);
      g12 += state.sigma(0, 1);
    }
  }
  g11 /= sweeps; g22 /= sweeps; g12 /= sweeps;
  REQUIRE(g11 == Catch::Approx(m11).epsilon(0.03));
  REQUIRE(g22 == Catch::Approx(m22).epsilon(0.03));
  REQUIRE(g12 == Catch::Approx(m12).epsilon(0.03));
}

TEST_CASE("diffuse prior recovers the sample covariance scaling") {
  // v0 ~ v1 and wide: posterior mean of sigma approaches S_y|x / T
  RngStream rng(305, 0);
  const long n = 3, t = 300;
  Eigen::MatrixXd a(n, n);
  a << 1.0, 0.4, 0.0, 0.4, 1.0, 0.3, 0.0, 0.3, 1.0;
  const Eigen::MatrixXd chol_l = Eigen::LLT<Eigen::MatrixXd>(a).matrixL();
  Eigen::MatrixXd y(t, n);
  Eigen::VectorXd z(n);
  for (long i = 0; i < t; ++i) {
    for (long j = 0; j < n; ++j) z(j) = rng.normal();
    y.row(i) = (chol_l * z).transpose();
  }
  const auto st = stats_from_data(y);
  CovGraphState state = CovGraphState::identity_init(n);
  SpikeSlab spike = SpikeSlab::make(10.0, 1.0 + 1e-9, state.graph);
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, n);
  const long sweeps = 30000, burn = 2000;
  for (long it = 0; it < sweeps + burn; ++it) {
    for (long i = 0; i < n; ++i) update_sigma_column(state, st, spike, i, rng);
    if (it >= burn) mean += state.sigma;
  }
  mean /= static_cast<double>(sweeps);
  const Eigen::MatrixXd target = st.s_y_given_x / t;
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      REQUIRE(std::fabs(mean(i, j) - target(i, j)) <
              0.05 * std::sqrt(target(i, i) * target(j, j)));
    }
  }
}

TEST_CASE("update_graph respects prior dominance and refreshes V") {
  RngStream rng(306, 0);
  CovGraphState state = CovGraphState::identity_init(4);
  state.sigma = oracle::random_spd(4, rng);
  SpikeSlab spike = SpikeSlab::make(0.02, 50.0, state.graph);
  Eigen::MatrixXd probs = Eigen::MatrixXd::Constant(4, 4, 1.0);
  probs.diagonal().setZero();
  update_graph(state, spike, probs, rng);
  for (long i = 0; i < 4; ++i) {
    for (long j = i + 1; j < 4; ++j) {
      REQUIRE(state.graph(i, j) == 1);
      REQUIRE(spike.v(i, j) == Catch::Approx(1.0));
    }
  }
  REQUIRE(state.graph_is_valid());
}
