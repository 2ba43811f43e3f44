#pragma once

// Graph-recovery metrics, network density and standardization, the
// clustering coefficient, and Procrustes alignment of latent positions.

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "bcglpm/errors.hpp"

namespace bcglpm {

struct RecoveryReport {
  long tp = 0, fp = 0, tn = 0, fn = 0;
  double acc = 0.0;  // percent
  double auc = 0.0;  // percent
};

namespace detail {

inline void require_square_symmetric_int(const Eigen::MatrixXi& g,
                                         const char* what) {
  if (g.rows() != g.cols()) throw validation_error(std::string(what) + ": not square");
  if (g != g.transpose().eval()) {
    throw validation_error(std::string(what) + ": not symmetric");
  }
}

}  // namespace detail

// TP/FP/ACC from the median-probability graph (threshold 0.5); AUC from
// ranking all i<j pairs by edge probability, ties contributing average
// ranks (equals the trapezoidal ROC area).
inline RecoveryReport recovery_metrics(const Eigen::MatrixXd& edge_prob,
                                       const Eigen::MatrixXi& true_graph) {
  detail::require_square_symmetric_int(true_graph, "recovery_metrics truth");
  const long n = true_graph.rows();
  if (edge_prob.rows() != n || edge_prob.cols() != n) {
    throw validation_error("recovery_metrics: dimension mismatch");
  }
  RecoveryReport rep;
  std::vector<std::pair<double, int>> scored;  // (prob, truth)
  scored.reserve(n * (n - 1) / 2);
  for (long i = 0; i < n; ++i) {
    for (long j = i + 1; j < n; ++j) {
      const int truth = true_graph(i, j) ? 1 : 0;
      const bool called = edge_prob(i, j) > 0.5;
      rep.tp += (truth && called);
      rep.fp += (!truth && called);
      rep.tn += (!truth && !called);
      rep.fn += (truth && !called);
      scored.emplace_back(edge_prob(i, j), truth);
    }
  }
  const double total = static_cast<double>(rep.tp + rep.fp + rep.tn + rep.fn);
  rep.acc = 100.0 * (rep.tp + rep.tn) / total;

  const long pos = rep.tp + rep.fn;
  const long neg = rep.fp + rep.tn;
  if (pos == 0 || neg == 0) {
    throw validation_error("recovery_metrics: AUC undefined for constant truth");
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < scored.size()) {
    std::size_t j = i;
    while (j < scored.size() && scored[j].first == scored[i].first) ++j;
    const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t t = i; t < j; ++t) {
      if (scored[t].second) rank_sum_pos += avg_rank;
    }
    i = j;
  }
  const double u_stat = rank_sum_pos - 0.5 * pos * (pos + 1.0);
  rep.auc = 100.0 * u_stat / (static_cast<double>(pos) * neg);
  return rep;
}

// Edge count divided by n(n-1)/2.
inline double network_density(const Eigen::MatrixXi& graph) {
  detail::require_square_symmetric_int(graph, "network_density");
  const long n = graph.rows();
  if (n < 2) throw validation_error("network_density: need n >= 2");
  long edges = 0;
  for (long i = 0; i < n; ++i) {
    for (long j = i + 1; j < n; ++j) edges += graph(i, j) ? 1 : 0;
  }
  return static_cast<double>(edges) / (0.5 * n * (n - 1));
}

struct StandardizedSeries {
  std::vector<double> z;
  // contiguous index ranges [first, last] with z > 0, for the
  // critical-period report
  std::vector<std::pair<long, long>> positive_runs;
};

// (x - mean)/sd over the full series with the sample (n-1) standard
// deviation, so a two-point series (0, 2) maps to (-0.7071, 0.7071).
inline StandardizedSeries standardize_series(const std::vector<double>& values) {
  const long n = static_cast<long>(values.size());
  if (n < 2) throw validation_error("standardize_series: need >= 2 values");
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double var = 0.0;
  for (const double v : values) var += (v - mean) * (v - mean);
  var /= (n - 1);
  if (!(var > 0.0)) throw validation_error("standardize_series: zero variance");
  const double sd = std::sqrt(var);
  StandardizedSeries out;
  out.z.reserve(values.size());
  for (const double v : values) out.z.push_back((v - mean) / sd);
  long run_start = -1;
  for (long i = 0; i < n; ++i) {
    if (out.z[i] > 0.0) {
      if (run_start < 0) run_start = i;
    } else if (run_start >= 0) {
      out.positive_runs.emplace_back(run_start, i - 1);
      run_start = -1;
    }
  }
  if (run_start >= 0) out.positive_runs.emplace_back(run_start, n - 1);
  return out;
}

// 3 * triangles / paths-of-length-2 (closed ones included in the
// denominator); 0 when there are no two-paths.
inline double clustering_coefficient(const Eigen::MatrixXi& graph) {
  detail::require_square_symmetric_int(graph, "clustering_coefficient");
  const long n = graph.rows();
  long paths2 = 0;
  for (long i = 0; i < n; ++i) {
    long deg = 0;
    for (long j = 0; j < n; ++j) {
      if (j != i && graph(i, j)) ++deg;
    }
    paths2 += deg * (deg - 1) / 2;
  }
  if (paths2 == 0) return 0.0;
  long triangles = 0;
  for (long i = 0; i < n; ++i) {
    for (long j = i + 1; j < n; ++j) {
      if (!graph(i, j)) continue;
      for (long k = j + 1; k < n; ++k) {
        if (graph(i, k) && graph(j, k)) ++triangles;
      }
    }
  }
  return 3.0 * triangles / static_cast<double>(paths2);
}

struct ProcrustesResult {
  double rho = 1.0;               // scalar dilation
  Eigen::Matrix2d h;              // orthogonal (rotation/reflection)
  Eigen::RowVector2d c;           // translation
  double d = 0.0;                 // standardized distance in [0, 1]
  Eigen::MatrixXd transformed;    // rho * source * h + 1 c
};

// Least-squares similarity transform (translation, rotation/reflection,
// uniform scale) of source onto target; d is the minimized residual sum
// of squares over the centered total sum of squares of the target.
inline ProcrustesResult procrustes(const Eigen::MatrixXd& target,
                                   const Eigen::MatrixXd& source) {
  if (target.rows() != source.rows() || target.cols() != 2 || source.cols() != 2) {
    throw validation_error("procrustes: configurations must be n x 2 with equal n");
  }
  const Eigen::RowVector2d tmean = target.colwise().mean();
  const Eigen::RowVector2d smean = source.colwise().mean();
  const Eigen::MatrixXd tc = target.rowwise() - tmean;
  const Eigen::MatrixXd sc = source.rowwise() - smean;
  const double t_ss = tc.squaredNorm();
  const double s_ss = sc.squaredNorm();
  if (!(t_ss > 0.0)) throw validation_error("procrustes: degenerate target");
  if (!(s_ss > 0.0)) throw validation_error("procrustes: degenerate source");

  const Eigen::Matrix2d cross = sc.transpose() * tc;
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(cross,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  ProcrustesResult res;
  res.h = svd.matrixU() * svd.matrixV().transpose();
  const double trace_s = svd.singularValues().sum();
  res.rho = trace_s / s_ss;
  res.c = tmean - res.rho * smean * res.h;
  res.transformed = (res.rho * source * res.h).rowwise() + res.c;
  const double ratio = (trace_s * trace_s) / (t_ss * s_ss);
  res.d = std::min(1.0, std::max(0.0, 1.0 - ratio));
  return res;
}

// Consecutive-pair distances D(U_t, U_{t+1}).
inline std::vector<double> procrustes_series(
    const std::vector<Eigen::MatrixXd>& u_sequence) {
  if (u_sequence.size() < 2) {
    throw validation_error("procrustes_series: need >= 2 configurations");
  }
  std::vector<double> out;
  out.reserve(u_sequence.size() - 1);
  for (std::size_t t = 0; t + 1 < u_sequence.size(); ++t) {
    out.push_back(procrustes(u_sequence[t], u_sequence[t + 1]).d);
  }
  return out;
}

}  // namespace bcglpm
