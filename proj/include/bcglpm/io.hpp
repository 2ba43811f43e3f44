#pragma once

// File formats and ingestion: price CSVs, realized-volatility transform,
// panel/edges/latent/trace serialization, and the benchmark manifest.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bcglpm/dgp.hpp"
#include "bcglpm/engine.hpp"
#include "bcglpm/errors.hpp"
#include "bcglpm/log.hpp"
#include "bcglpm/metrics.hpp"
#include "bcglpm/panel.hpp"
#include "bcglpm/version.hpp"

namespace bcglpm {

using json = nlohmann::json;

// Floats in CSV outputs carry 17 significant digits (lossless round-trip).
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline std::string strip(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline bool is_missing(const std::string& s) {
  return s.empty() || s == "NA" || s == "na" || s == "nan" || s == "NaN";
}

inline double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw validation_error("could not parse number '" + s + "' at " + where);
  }
}

inline bool looks_like_iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

inline std::vector<std::string> read_all_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot write file: " + path.string());
  return out;
}

// synthetic ISO dates for simulated panels, day t counted from 2000-01-01
inline std::string synthetic_date(long t) {
  using namespace std::chrono;
  const sys_days day0 = sys_days{year{2000} / January / 1};
  const year_month_day ymd{day0 + days{t}};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()));
  return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// price-level CSV

struct PriceCsv {
  std::vector<std::string> dates;   // strictly increasing ISO-8601
  std::vector<std::string> labels;  // per instrument
  Eigen::MatrixXd prices;           // T x n, strictly positive
  long dropped_rows = 0;
};

// First column ISO-8601 date, remaining columns price levels, header row
// required.  Rows with any missing value are dropped (count logged).
inline PriceCsv ingest_prices(const std::string& path) {
  const auto lines = detail::read_all_lines(path);
  if (lines.size() < 2) throw validation_error(path + ": need a header and data");
  const auto header = detail::split_csv_line(lines[0]);
  if (header.size() < 2) {
    throw validation_error(path + ": need a date column plus >= 1 instrument");
  }
  PriceCsv out;
  out.labels.assign(header.begin() + 1, header.end());
  const std::size_t n = out.labels.size();

  std::vector<std::string> dates;
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    if (detail::strip(lines[r]).empty()) continue;
    const auto fields = detail::split_csv_line(lines[r]);
    const std::string where = path + " row " + std::to_string(r + 1);
    if (fields.size() != n + 1) {
      throw validation_error(where + ": expected " + std::to_string(n + 1) +
                             " fields, got " + std::to_string(fields.size()));
    }
    bool missing = false;
    for (std::size_t c = 1; c <= n; ++c) {
      if (detail::is_missing(detail::strip(fields[c]))) missing = true;
    }
    if (missing) {
      ++out.dropped_rows;
      continue;
    }
    const std::string date = detail::strip(fields[0]);
    if (!detail::looks_like_iso_date(date)) {
      throw validation_error(where + ": malformed date '" + date + "'");
    }
    if (!dates.empty() && date <= dates.back()) {
      throw validation_error(where + ": non-increasing date '" + date + "'");
    }
    std::vector<double> row(n);
    for (std::size_t c = 0; c < n; ++c) {
      row[c] = detail::parse_double(detail::strip(fields[c + 1]), where);
      if (!(row[c] > 0.0)) {
        throw validation_error(where + ": non-positive price");
      }
    }
    dates.push_back(date);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw validation_error(path + ": no usable rows");
  if (out.dropped_rows > 0) {
    log_info(path + ": dropped " + std::to_string(out.dropped_rows) +
             " row(s) with missing values");
  }
  out.dates = std::move(dates);
  out.prices.resize(static_cast<long>(rows.size()), static_cast<long>(n));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      out.prices(static_cast<long>(r), static_cast<long>(c)) = rows[r][c];
    }
  }
  return out;
}

inline constexpr double kLogRvFloor = 1e-12;

// RV_t = [100 (log I_t - log I_{t-1})]^2, length T-1; with log_rv the
// series is log(max(RV, 1e-12)).
inline TimeSeriesPanel realized_volatility(const PriceCsv& prices,
                                           bool log_rv = true) {
  const long t = prices.prices.rows();
  if (t < 2) throw validation_error("realized_volatility: need >= 2 rows");
  if ((prices.prices.array() <= 0.0).any()) {
    throw validation_error("realized_volatility: non-positive price");
  }
  TimeSeriesPanel panel;
  const long n = prices.prices.cols();
  panel.y.resize(t - 1, n);
  for (long r = 1; r < t; ++r) {
    for (long c = 0; c < n; ++c) {
      const double ret =
          100.0 * (std::log(prices.prices(r, c)) - std::log(prices.prices(r - 1, c)));
      double rv = ret * ret;
      if (log_rv) rv = std::log(std::max(rv, kLogRvFloor));
      panel.y(r - 1, c) = rv;
    }
  }
  panel.m = Eigen::MatrixXd(t - 1, 0);
  panel.dates.assign(prices.dates.begin() + 1, prices.dates.end());
  panel.labels = prices.labels;
  return panel;
}

// Move the named columns of Y into the market block M.
inline TimeSeriesPanel split_market(const TimeSeriesPanel& panel,
                                    const std::vector<std::string>& market_cols) {
  if (market_cols.empty()) return panel;
  std::vector<long> market_idx;
  for (const auto& name : market_cols) {
    bool found = false;
    for (std::size_t j = 0; j < panel.labels.size(); ++j) {
      if (panel.labels[j] == name) {
        market_idx.push_back(static_cast<long>(j));
        found = true;
        break;
      }
    }
    if (!found) throw validation_error("market column not found: " + name);
  }
  TimeSeriesPanel out;
  const long t = panel.rows();
  const long n = panel.n_series();
  const long m = static_cast<long>(market_idx.size());
  if (m >= n) throw validation_error("market columns leave no endogenous series");
  out.y.resize(t, n - m);
  out.m.resize(t, m);
  out.dates = panel.dates;
  out.standardized = panel.standardized;
  long yc = 0;
  for (long j = 0; j < n; ++j) {
    const bool is_market =
        std::find(market_idx.begin(), market_idx.end(), j) != market_idx.end();
    if (is_market) continue;
    out.y.col(yc) = panel.y.col(j);
    out.labels.push_back(panel.labels[j]);
    ++yc;
  }
  for (long k = 0; k < m; ++k) out.m.col(k) = panel.y.col(market_idx[k]);
  return out;
}

// ---------------------------------------------------------------------------
// panel CSV (values, not prices): date column + named series

inline void write_panel_csv(const std::string& path, const TimeSeriesPanel& panel) {
  auto out = detail::open_out(path);
  out << "date";
  for (long j = 0; j < panel.n_series(); ++j) {
    out << ','
        << (j < static_cast<long>(panel.labels.size()) ? panel.labels[j]
                                                       : "s" + std::to_string(j));
  }
  out << '\n';
  for (long r = 0; r < panel.rows(); ++r) {
    out << (r < static_cast<long>(panel.dates.size()) ? panel.dates[r]
                                                      : detail::synthetic_date(r));
    for (long j = 0; j < panel.n_series(); ++j) {
      out << ',' << format_g17(panel.y(r, j));
    }
    out << '\n';
  }
}

inline TimeSeriesPanel read_panel_csv(const std::string& path) {
  const auto lines = detail::read_all_lines(path);
  if (lines.size() < 2) throw validation_error(path + ": need a header and data");
  const auto header = detail::split_csv_line(lines[0]);
  if (header.size() < 2) throw validation_error(path + ": no series columns");
  TimeSeriesPanel panel;
  panel.labels.assign(header.begin() + 1, header.end());
  const std::size_t n = panel.labels.size();
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    if (detail::strip(lines[r]).empty()) continue;
    const auto fields = detail::split_csv_line(lines[r]);
    const std::string where = path + " row " + std::to_string(r + 1);
    if (fields.size() != n + 1) {
      throw validation_error(where + ": ragged row");
    }
    panel.dates.push_back(detail::strip(fields[0]));
    std::vector<double> row(n);
    for (std::size_t c = 0; c < n; ++c) {
      row[c] = detail::parse_double(detail::strip(fields[c + 1]), where);
    }
    rows.push_back(std::move(row));
  }
  panel.y.resize(static_cast<long>(rows.size()), static_cast<long>(n));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      panel.y(static_cast<long>(r), static_cast<long>(c)) = rows[r][c];
    }
  }
  panel.m = Eigen::MatrixXd(panel.y.rows(), 0);
  panel.validate();
  return panel;
}

// ---------------------------------------------------------------------------
// graphs, edges, latent positions, traces

inline void write_truth_csv(const std::string& path, const Eigen::MatrixXi& graph) {
  auto out = detail::open_out(path);
  out << "i,j,edge\n";
  for (long i = 0; i < graph.rows(); ++i) {
    for (long j = i + 1; j < graph.cols(); ++j) {
      out << i << ',' << j << ',' << (graph(i, j) ? 1 : 0) << '\n';
    }
  }
}

namespace detail {

inline long nodes_from_pair_count(std::size_t pairs, const std::string& path) {
  const double n = 0.5 * (1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(pairs)));
  const long rounded = static_cast<long>(std::lround(n));
  if (rounded < 2 ||
      static_cast<std::size_t>(rounded * (rounded - 1) / 2) != pairs) {
    throw validation_error(path + ": row count is not a full i<j pair listing");
  }
  return rounded;
}

}  // namespace detail

inline Eigen::MatrixXi read_truth_csv(const std::string& path) {
  const auto lines = detail::read_all_lines(path);
  if (lines.size() < 2) throw validation_error(path + ": empty truth file");
  std::vector<std::array<long, 3>> rows;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    if (detail::strip(lines[r]).empty()) continue;
    const auto f = detail::split_csv_line(lines[r]);
    if (f.size() != 3) throw validation_error(path + ": expected i,j,edge rows");
    rows.push_back({std::stol(f[0]), std::stol(f[1]),
                    std::stol(detail::strip(f[2]))});
  }
  const long n = detail::nodes_from_pair_count(rows.size(), path);
  Eigen::MatrixXi graph = Eigen::MatrixXi::Zero(n, n);
  for (const auto& row : rows) {
    if (row[0] < 0 || row[1] <= row[0] || row[1] >= n) {
      throw validation_error(path + ": invalid pair indices");
    }
    graph(row[0], row[1]) = row[2] ? 1 : 0;
    graph(row[1], row[0]) = graph(row[0], row[1]);
  }
  return graph;
}

inline void write_edges_csv(const std::string& path,
                            const PosteriorSummary& summary) {
  auto out = detail::open_out(path);
  out << "i,j,edge_prob,median_edge\n";
  const long n = summary.edge_prob.rows();
  for (long i = 0; i < n; ++i) {
    for (long j = i + 1; j < n; ++j) {
      out << i << ',' << j << ',' << format_g17(summary.edge_prob(i, j)) << ','
          << (summary.median_graph(i, j) ? 1 : 0) << '\n';
    }
  }
}

struct EdgesFile {
  Eigen::MatrixXd edge_prob;
  Eigen::MatrixXi median_graph;
};

inline EdgesFile read_edges_csv(const std::string& path) {
  const auto lines = detail::read_all_lines(path);
  if (lines.size() < 2) throw validation_error(path + ": empty edges file");
  struct Row { long i, j; double p; int m; };
  std::vector<Row> rows;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    if (detail::strip(lines[r]).empty()) continue;
    const auto f = detail::split_csv_line(lines[r]);
    if (f.size() != 4) throw validation_error(path + ": expected 4 columns");
    rows.push_back({std::stol(f[0]), std::stol(f[1]),
                    detail::parse_double(detail::strip(f[2]), path),
                    static_cast<int>(std::stol(detail::strip(f[3])))});
  }
  const long n = detail::nodes_from_pair_count(rows.size(), path);
  EdgesFile out;
  out.edge_prob = Eigen::MatrixXd::Zero(n, n);
  out.median_graph = Eigen::MatrixXi::Zero(n, n);
  for (const auto& row : rows) {
    out.edge_prob(row.i, row.j) = row.p;
    out.edge_prob(row.j, row.i) = row.p;
    out.median_graph(row.i, row.j) = row.m;
    out.median_graph(row.j, row.i) = row.m;
  }
  return out;
}

inline void write_latent_csv(const std::string& path, const Eigen::MatrixXd& u,
                             const std::vector<std::string>& labels) {
  if (u.cols() != 2) throw validation_error("write_latent_csv: need n x 2");
  auto out = detail::open_out(path);
  out << "node,label,u1,u2\n";
  for (long i = 0; i < u.rows(); ++i) {
    const std::string label =
        i < static_cast<long>(labels.size()) ? labels[i] : "s" + std::to_string(i);
    out << i << ',' << label << ',' << format_g17(u(i, 0)) << ','
        << format_g17(u(i, 1)) << '\n';
  }
}

struct LatentFile {
  std::vector<std::string> labels;
  Eigen::MatrixXd u;
};

inline LatentFile read_latent_csv(const std::string& path) {
  const auto lines = detail::read_all_lines(path);
  if (lines.size() < 2) throw validation_error(path + ": empty latent file");
  LatentFile out;
  std::vector<std::array<double, 2>> coords;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    if (detail::strip(lines[r]).empty()) continue;
    const auto f = detail::split_csv_line(lines[r]);
    if (f.size() != 4) throw validation_error(path + ": expected 4 columns");
    out.labels.push_back(f[1]);
    coords.push_back({detail::parse_double(detail::strip(f[2]), path),
                      detail::parse_double(detail::strip(f[3]), path)});
  }
  out.u.resize(static_cast<long>(coords.size()), 2);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    out.u(static_cast<long>(i), 0) = coords[i][0];
    out.u(static_cast<long>(i), 1) = coords[i][1];
  }
  return out;
}

inline void write_trace_csv(const std::string& path, const ChainTrace& trace) {
  auto out = detail::open_out(path);
  out << "sweep,score\n";
  for (std::size_t s = 0; s < trace.scores.size(); ++s) {
    out << (s + 1) << ',' << format_g17(trace.scores[s]) << '\n';
  }
}

inline void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
  auto out = detail::open_out(path);
  for (long i = 0; i < m.rows(); ++i) {
    for (long j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_g17(m(i, j));
    }
    out << '\n';
  }
}

inline Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  const auto lines = detail::read_all_lines(path);
  std::vector<std::vector<double>> rows;
  for (const auto& line : lines) {
    if (detail::strip(line).empty()) continue;
    const auto f = detail::split_csv_line(line);
    std::vector<double> row;
    row.reserve(f.size());
    for (const auto& cell : f) {
      row.push_back(detail::parse_double(detail::strip(cell), path));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw validation_error(path + ": empty matrix");
  Eigen::MatrixXd m(static_cast<long>(rows.size()),
                    static_cast<long>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) {
      throw validation_error(path + ": ragged matrix");
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<long>(i), static_cast<long>(j)) = rows[i][j];
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// summary JSON and the per-fit output bundle

inline json config_to_json(const FitConfig& config) {
  return json{{"mode", to_string(config.mode)},
              {"n_iter", config.n_iter},
              {"burn_in", config.burn_in},
              {"n_chains", config.n_chains},
              {"v0", config.v0},
              {"h", config.h},
              {"theta0", config.theta0},
              {"tau_theta_sq", config.tau_theta_sq},
              {"tau_lambda_sq", config.tau_lambda_sq},
              {"ridge_grid", config.ridge_grid},
              {"ridge_split", config.ridge_split},
              {"ridge_tol", config.ridge_tol},
              {"standardize", config.standardize},
              {"random_column_order", config.random_column_order},
              {"thin", config.thin},
              {"seed", config.seed},
              {"align_to_last", config.align_to_last}};
}

// Writes edges.csv, latent.csv (when the mode carries latent positions),
// summary.json and trace.csv (per chain beyond the first:
// trace_chain<k>.csv).
inline void emit_outputs(const PosteriorSummary& summary,
                         const std::vector<ChainTrace>& traces,
                         const std::string& dir,
                         const std::vector<std::string>& labels,
                         const FitConfig& config) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path base(dir);
  write_edges_csv((base / "edges.csv").string(), summary);
  if (summary.has_lpm && summary.u_hat.size() > 0) {
    write_latent_csv((base / "latent.csv").string(), summary.u_hat, labels);
  }
  if (traces.empty()) throw validation_error("emit_outputs: no chain trace");
  write_trace_csv((base / "trace.csv").string(), traces[0]);
  for (std::size_t c = 1; c < traces.size(); ++c) {
    write_trace_csv((base / ("trace_chain" + std::to_string(c) + ".csv")).string(),
                    traces[c]);
  }

  json doc;
  doc["version"] = version;
  doc["seed"] = config.seed;
  doc["n"] = summary.edge_prob.rows();
  doc["theta_mean"] = summary.has_lpm ? json(summary.theta_mean) : json();
  doc["lambda_mean"] =
      summary.has_lpm
          ? json::array({summary.lambda_mean(0), summary.lambda_mean(1)})
          : json();
  doc["psrf"] = summary.psrf ? json(*summary.psrf) : json();
  doc["density"] = network_density(summary.median_graph);
  doc["density_posterior_mean"] = summary.density_posterior_mean;
  doc["gcc"] = clustering_coefficient(summary.median_graph);
  doc["config"] = config_to_json(config);
  auto out = detail::open_out(base / "summary.json");
  out << doc.dump(2) << '\n';
}

inline void emit_outputs(const PosteriorSummary& summary, const ChainTrace& trace,
                         const std::string& dir,
                         const std::vector<std::string>& labels,
                         const FitConfig& config) {
  emit_outputs(summary, std::vector<ChainTrace>{trace}, dir, labels, config);
}

// ---------------------------------------------------------------------------
// planted instances and the benchmark manifest

inline void write_instance(const std::string& dir, const PlantedInstance& inst,
                           const DgpSpec& spec) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path base(dir);
  TimeSeriesPanel panel;
  panel.y = inst.data;
  panel.m = Eigen::MatrixXd(inst.data.rows(), 0);
  for (long t = 0; t < inst.data.rows(); ++t) {
    panel.dates.push_back(detail::synthetic_date(t));
  }
  for (long j = 0; j < inst.data.cols(); ++j) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "s%03ld", j + 1);
    panel.labels.emplace_back(buf);
  }
  write_panel_csv((base / "data.csv").string(), panel);
  write_truth_csv((base / "truth.csv").string(), inst.true_graph);
  write_matrix_csv((base / "sigma.csv").string(), inst.sigma_true);
  json meta{{"n", spec.n},
            {"T", spec.t},
            {"setup", to_string(spec.setup)},
            {"edge_prob", spec.edge_prob},
            {"coef_lo", spec.coef_lo},
            {"coef_hi", spec.coef_hi},
            {"seed", spec.seed},
            {"discard", spec.discard}};
  if (inst.a_true.size() > 0) {
    meta["a_true"] = std::vector<double>(inst.a_true.data(),
                                         inst.a_true.data() + inst.a_true.size());
  }
  auto out = detail::open_out(base / "meta.json");
  out << meta.dump(2) << '\n';
}

struct BenchmarkCell {
  long n = 0;
  long t = 0;
  LagMode setup = LagMode::lag0;
  int rep = 0;
  std::uint64_t seed = 0;
  std::string dir;
};

struct BenchmarkManifest {
  std::vector<BenchmarkCell> cells;
};

// Full grid (n x T-multiplier x setup x rep) with per-cell seeds derived
// from the master seed; instances land under out_dir with a manifest.json
// at the top.
inline BenchmarkManifest replicate_benchmark(
    const std::vector<long>& n_list, const std::vector<long>& t_multipliers,
    const std::vector<LagMode>& setups, int reps, std::uint64_t seed,
    const std::string& out_dir) {
  namespace fs = std::filesystem;
  if (n_list.empty() || t_multipliers.empty() || setups.empty() || reps < 1) {
    throw validation_error("replicate_benchmark: empty grid");
  }
  fs::create_directories(out_dir);
  BenchmarkManifest manifest;
  std::uint64_t counter = 0;
  for (const long n : n_list) {
    for (const long mult : t_multipliers) {
      for (const LagMode setup : setups) {
        for (int rep = 0; rep < reps; ++rep) {
          BenchmarkCell cell;
          cell.n = n;
          cell.t = n * mult;
          cell.setup = setup;
          cell.rep = rep;
          cell.seed = derive_seed(seed, counter++);
          char buf[128];
          std::snprintf(buf, sizeof(buf), "n%03ld_T%05ld_%s/rep%02d", n, cell.t,
                        to_string(setup), rep);
          cell.dir = (fs::path(out_dir) / buf).string();
          DgpSpec spec;
          spec.n = cell.n;
          spec.t = cell.t;
          spec.setup = setup;
          spec.seed = cell.seed;
          write_instance(cell.dir, generate(spec), spec);
          manifest.cells.push_back(cell);
        }
      }
    }
  }
  json doc = json::array();
  for (const auto& cell : manifest.cells) {
    doc.push_back({{"n", cell.n},
                   {"T", cell.t},
                   {"setup", to_string(cell.setup)},
                   {"rep", cell.rep},
                   {"seed", cell.seed},
                   {"dir", cell.dir}});
  }
  auto out = detail::open_out(fs::path(out_dir) / "manifest.json");
  out << doc.dump(2) << '\n';
  return manifest;
}

}  // namespace bcglpm
