#pragma once

// Test-side oracles, independent of the library's implementation paths:
// quadrature-based CDFs, Bessel-ratio moments, Kolmogorov-Smirnov
// machinery, brute-force metric recomputations, and small MCMC reference
// samplers.

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <functional>
#include <vector>

#include "bcglpm/rng.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// quadrature

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int n_intervals = 4096) {
  if (n_intervals % 2 != 0) ++n_intervals;
  const double h = (b - a) / n_intervals;
  double sum = f(a) + f(b);
  for (int i = 1; i < n_intervals; ++i) {
    sum += f(a + i * h) * (i % 2 == 0 ? 2.0 : 4.0);
  }
  return sum * h / 3.0;
}

// ---------------------------------------------------------------------------
// GIG reference quantities (three-parameter form)

inline double gig_log_unnormalized(double x, double q, double a, double b) {
  return (q - 1.0) * std::log(x) - 0.5 * (a * x + b / x);
}

// E[X] = sqrt(b/a) K_{q+1}(sqrt(ab)) / K_q(sqrt(ab))
inline double gig_mean_bessel(double q, double a, double b) {
  const double omega = std::sqrt(a * b);
  return std::sqrt(b / a) * boost::math::cyl_bessel_k(q + 1.0, omega) /
         boost::math::cyl_bessel_k(q, omega);
}

// numerically integrated CDF evaluated at sorted sample points
inline std::vector<double> gig_cdf_at(const std::vector<double>& sorted_x,
                                      double q, double a, double b) {
  // integrate the density shifted by its log maximum for range safety
  const double mode =
      ((q - 1.0) + std::sqrt((q - 1.0) * (q - 1.0) + a * b)) / a;
  const double log_peak = gig_log_unnormalized(mode, q, a, b);
  auto dens = [&](double x) {
    return x <= 0.0 ? 0.0 : std::exp(gig_log_unnormalized(x, q, a, b) - log_peak);
  };
  const double hi = sorted_x.back() * 1.5 + 10.0 * mode;
  const double total = simpson(dens, 1e-12, hi, 200000);
  std::vector<double> cdf(sorted_x.size());
  double acc = 0.0;
  double prev = 1e-12;
  for (std::size_t i = 0; i < sorted_x.size(); ++i) {
    acc += simpson(dens, prev, sorted_x[i], 64);
    prev = sorted_x[i];
    cdf[i] = acc / total;
  }
  return cdf;
}

// one-sided truncated normal CDF by quadrature (X ~ N(mean,1) | X > 0)
inline std::vector<double> truncnorm_pos_cdf_at(const std::vector<double>& sorted_x,
                                                double mean) {
  auto dens = [&](double x) {
    return x <= 0.0 ? 0.0 : std::exp(-0.5 * (x - mean) * (x - mean));
  };
  const double hi = std::max(sorted_x.back() * 1.5, mean + 12.0);
  const double total = simpson(dens, 0.0, hi, 100000);
  std::vector<double> cdf(sorted_x.size());
  double acc = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < sorted_x.size(); ++i) {
    acc += simpson(dens, prev, sorted_x[i], 64);
    prev = sorted_x[i];
    cdf[i] = acc / total;
  }
  return cdf;
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov

inline double ks_statistic_sorted(const std::vector<double>& sorted_sample,
                                  const std::vector<double>& cdf_values) {
  const double n = static_cast<double>(sorted_sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted_sample.size(); ++i) {
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(std::fabs(cdf_values[i] - lo),
                             std::fabs(cdf_values[i] - hi)));
  }
  return d;
}

// critical value of the one-sample two-sided KS test, alpha = 0.01
inline double ks_critical_001(std::size_t n) {
  return 1.6276 / std::sqrt(static_cast<double>(n));
}

// asymptotic two-sample KS p-value
inline double ks2_pvalue(double d, std::size_t n1, std::size_t n2) {
  const double ne = std::sqrt(static_cast<double>(n1) * n2 / (n1 + n2));
  const double lambda = (ne + 0.12 + 0.11 / ne) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) {
    p += 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  }
  return std::min(1.0, std::max(0.0, p));
}

// ---------------------------------------------------------------------------
// brute-force metric recomputations

// AUC by exhaustive (positive, negative) pair comparison, percent
inline double auc_pairwise(const Eigen::MatrixXd& prob,
                           const Eigen::MatrixXi& truth) {
  std::vector<double> pos, neg;
  for (long i = 0; i < truth.rows(); ++i) {
    for (long j = i + 1; j < truth.cols(); ++j) {
      (truth(i, j) ? pos : neg).push_back(prob(i, j));
    }
  }
  double wins = 0.0;
  for (const double p : pos) {
    for (const double q : neg) {
      if (p > q) wins += 1.0;
      else if (p == q) wins += 0.5;
    }
  }
  return 100.0 * wins / (static_cast<double>(pos.size()) * neg.size());
}

// clustering coefficient by exhaustive triple enumeration
inline double gcc_enumeration(const Eigen::MatrixXi& g) {
  const long n = g.rows();
  long closed = 0, connected_triples = 0;
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      for (long k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        // ordered triple with j as the center of a two-path
        if (g(i, j) && g(j, k)) {
          ++connected_triples;
          if (g(i, k)) ++closed;
        }
      }
    }
  }
  // ordered closed triples / ordered two-paths equals 3T / P2
  if (connected_triples == 0) return 0.0;
  return static_cast<double>(closed) / connected_triples;
}

// ---------------------------------------------------------------------------
// random small helpers

inline Eigen::MatrixXd random_spd(long n, bcglpm::RngStream& rng,
                                  double ridge = 0.5) {
  Eigen::MatrixXd a(n, n);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) a(i, j) = rng.normal();
  }
  Eigen::MatrixXd s = a * a.transpose() / n;
  s.diagonal().array() += ridge;
  return s;
}

inline Eigen::MatrixXi random_graph(long n, double p, bcglpm::RngStream& rng) {
  Eigen::MatrixXi g = Eigen::MatrixXi::Zero(n, n);
  for (long i = 0; i < n; ++i) {
    for (long j = i + 1; j < n; ++j) {
      if (rng.bernoulli(p)) {
        g(i, j) = 1;
        g(j, i) = 1;
      }
    }
  }
  return g;
}

inline Eigen::MatrixXd random_orthonormal_2col(long n, bcglpm::RngStream& rng) {
  Eigen::MatrixXd m(n, 2);
  for (long i = 0; i < n; ++i) {
    m(i, 0) = rng.normal();
    m(i, 1) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, 2);
}

}  // namespace oracle
