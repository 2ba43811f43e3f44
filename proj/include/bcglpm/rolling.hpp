#pragma once

// Rolling-window driver: window plan arithmetic, per-window fits with
// deterministic seed derivation, and the density / standardized-density /
// clustering / Procrustes time series.

#include <cstdio>
#include <filesystem>
#include <future>
#include <string>
#include <utility>
#include <vector>

#include "bcglpm/config.hpp"
#include "bcglpm/engine.hpp"
#include "bcglpm/errors.hpp"
#include "bcglpm/io.hpp"
#include "bcglpm/log.hpp"
#include "bcglpm/metrics.hpp"

namespace bcglpm {

struct WindowPlan {
  long window_len = 252;
  long step = 21;
  std::vector<std::pair<long, long>> ranges;  // (first, count)
};

// Windows fully inside the sample: floor((T - len)/step) + 1 of them.
inline WindowPlan make_window_plan(long t, long window_len, long step) {
  if (window_len < 2 || step < 1) {
    throw validation_error("window plan: need window_len >= 2, step >= 1");
  }
  if (window_len > t) {
    throw validation_error("window plan: window longer than the sample (" +
                           std::to_string(window_len) + " > " +
                           std::to_string(t) + ")");
  }
  WindowPlan plan;
  plan.window_len = window_len;
  plan.step = step;
  const long count = (t - window_len) / step + 1;
  for (long w = 0; w < count; ++w) {
    plan.ranges.emplace_back(w * step, window_len);
  }
  return plan;
}

struct WindowResult {
  long index = 0;
  std::string start_date;
  std::string end_date;
  PosteriorSummary summary;
};

struct RollingResult {
  std::vector<WindowResult> windows;
  std::vector<double> density;      // median-graph density per window
  std::vector<double> std_density;  // empty when standardization not possible
  std::vector<std::pair<long, long>> critical_periods;  // positive-run windows
  std::vector<double> gcc;
  std::vector<double> procrustes_d;  // consecutive-window distances
};

namespace detail {

inline std::string window_dir_name(long index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "window_%03ld", index);
  return buf;
}

}  // namespace detail

// Fits every window independently (per-window seeds derived from the base
// seed, so results do not depend on --jobs), writes per-window outputs as
// they complete, then the four series files.  A window failure aborts with
// the window id; artifacts of completed windows stay on disk.
inline RollingResult rolling_fit(const TimeSeriesPanel& panel,
                                 const WindowPlan& plan,
                                 const RunConfig& config) {
  namespace fs = std::filesystem;
  if (plan.ranges.empty()) throw validation_error("rolling: no windows");
  if (config.out_dir.empty()) throw validation_error("rolling: output dir unset");
  fs::create_directories(config.out_dir);
  const int jobs = std::max(1, config.jobs);

  const long n_windows = static_cast<long>(plan.ranges.size());
  std::vector<WindowResult> results(n_windows);

  auto run_window = [&](long w) {
    const auto [first, count] = plan.ranges[w];
    const TimeSeriesPanel slice = panel.window(first, count);
    FitConfig fit_config = config.fit;
    fit_config.seed = derive_seed(config.fit.seed, static_cast<std::uint64_t>(w));
    const FitResult fit_result = bcglpm::fit(slice, fit_config);
    const std::string dir =
        (fs::path(config.out_dir) / detail::window_dir_name(w)).string();
    emit_outputs(fit_result.summary, fit_result.traces, dir, slice.labels,
                 fit_config);
    WindowResult wr;
    wr.index = w;
    wr.start_date = slice.dates.empty() ? "" : slice.dates.front();
    wr.end_date = slice.dates.empty() ? "" : slice.dates.back();
    wr.summary = fit_result.summary;
    return wr;
  };

  for (long base = 0; base < n_windows; base += jobs) {
    const long batch = std::min<long>(jobs, n_windows - base);
    std::vector<std::future<WindowResult>> futures;
    for (long k = 0; k < batch; ++k) {
      const long w = base + k;
      futures.push_back(std::async(std::launch::async, [&, w] { return run_window(w); }));
    }
    for (long k = 0; k < batch; ++k) {
      try {
        results[base + k] = futures[k].get();
      } catch (const std::exception& e) {
        throw numeric_error("rolling: window " + std::to_string(base + k) +
                            " failed: " + e.what());
      }
    }
  }

  RollingResult rolled;
  rolled.windows = std::move(results);
  std::vector<Eigen::MatrixXd> u_series;
  for (const auto& wr : rolled.windows) {
    rolled.density.push_back(network_density(wr.summary.median_graph));
    rolled.gcc.push_back(clustering_coefficient(wr.summary.median_graph));
    if (wr.summary.has_lpm && wr.summary.u_hat.size() > 0) {
      u_series.push_back(wr.summary.u_hat);
    }
  }
  if (rolled.density.size() >= 2) {
    try {
      const StandardizedSeries std_series = standardize_series(rolled.density);
      rolled.std_density = std_series.z;
      rolled.critical_periods = std_series.positive_runs;
    } catch (const validation_error& e) {
      log_warn(std::string("rolling: standardized density unavailable: ") +
               e.what());
    }
  }
  if (u_series.size() >= 2) rolled.procrustes_d = procrustes_series(u_series);

  // series files
  const fs::path base(config.out_dir);
  auto write_series = [&](const char* name, const std::vector<double>& values,
                          long offset) {
    auto out = detail::open_out(base / name);
    out << "window,end_date,value\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
      const long w = static_cast<long>(i) + offset;
      out << w << ',' << rolled.windows[w].end_date << ','
          << format_g17(values[i]) << '\n';
    }
  };
  write_series("density.csv", rolled.density, 0);
  write_series("std_density.csv", rolled.std_density, 0);
  write_series("gcc.csv", rolled.gcc, 0);
  if (lpm_enabled(config.fit.mode)) {
    // distance between window w-1 and w recorded at the later window
    write_series("procrustes.csv", rolled.procrustes_d, 1);
  }

  json doc;
  doc["version"] = version;
  doc["seed"] = config.fit.seed;
  doc["mode"] = to_string(config.fit.mode);
  doc["window_len"] = plan.window_len;
  doc["step"] = plan.step;
  doc["n_windows"] = n_windows;
  doc["log_rv"] = config.log_rv;
  doc["market_cols"] = config.market_cols;
  doc["config"] = config_to_json(config.fit);
  json periods = json::array();
  for (const auto& [first, last] : rolled.critical_periods) {
    periods.push_back({{"start_window", first},
                       {"end_window", last},
                       {"start_date", rolled.windows[first].end_date},
                       {"end_date", rolled.windows[last].end_date}});
  }
  doc["critical_periods"] = periods;
  auto out = detail::open_out(base / "rolling_summary.json");
  out << doc.dump(2) << '\n';
  return rolled;
}

}  // namespace bcglpm
