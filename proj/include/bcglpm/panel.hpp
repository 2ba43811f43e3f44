#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "bcglpm/errors.hpp"

namespace bcglpm {

// A T x n endogenous block Y plus an optional T x m market block M on a
// shared, strictly increasing date axis.
struct TimeSeriesPanel {
  Eigen::MatrixXd y;                 // T x n
  Eigen::MatrixXd m;                 // T x m (0 columns when absent)
  std::vector<std::string> dates;    // length T
  std::vector<std::string> labels;   // n names
  bool standardized = false;

  long rows() const { return y.rows(); }
  long n_series() const { return y.cols(); }
  long n_market() const { return m.cols(); }

  void validate() const {
    if (y.rows() == 0 || y.cols() == 0) {
      throw validation_error("panel: empty endogenous block");
    }
    if (m.cols() > 0 && m.rows() != y.rows()) {
      throw validation_error("panel: market block row count mismatch");
    }
    if (!dates.empty() && static_cast<long>(dates.size()) != y.rows()) {
      throw validation_error("panel: date axis length mismatch");
    }
    if (!labels.empty() && static_cast<long>(labels.size()) != y.cols()) {
      throw validation_error("panel: label count mismatch");
    }
    if (!y.allFinite() || !m.allFinite()) {
      throw validation_error("panel: missing or non-finite values");
    }
  }

  // Row slice [first, first+count).
  TimeSeriesPanel window(long first, long count) const {
    if (first < 0 || count < 1 || first + count > rows()) {
      throw validation_error("panel: window outside sample");
    }
    TimeSeriesPanel out;
    out.y = y.middleRows(first, count);
    out.m = m.cols() > 0 ? m.middleRows(first, count)
                         : Eigen::MatrixXd(count, 0);
    if (!dates.empty()) {
      out.dates.assign(dates.begin() + first, dates.begin() + first + count);
    }
    out.labels = labels;
    out.standardized = standardized;
    return out;
  }
};

namespace detail {

inline void standardize_columns(Eigen::MatrixXd& x) {
  const long t = x.rows();
  for (long j = 0; j < x.cols(); ++j) {
    const double mean = x.col(j).mean();
    const double var = (x.col(j).array() - mean).square().sum() / t;
    const double sd = std::sqrt(var);
    if (!(sd > 0.0)) {
      throw validation_error("standardize: column " + std::to_string(j) +
                             " has zero variance");
    }
    x.col(j) = (x.col(j).array() - mean) / sd;
  }
}

}  // namespace detail

// Column-wise standardization (zero mean, unit population variance),
// applied per estimation window before any lag construction.
inline TimeSeriesPanel standardize(const TimeSeriesPanel& panel) {
  TimeSeriesPanel out = panel;
  detail::standardize_columns(out.y);
  if (out.m.cols() > 0) detail::standardize_columns(out.m);
  out.standardized = true;
  return out;
}

}  // namespace bcglpm
