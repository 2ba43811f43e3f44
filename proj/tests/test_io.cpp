#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "bcglpm/config.hpp"
#include "bcglpm/io.hpp"
#include "oracles.hpp"

using namespace bcglpm;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
  const fs::path dir = fs::temp_directory_path() / "bcglpm_io_test";
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& content) {
  const fs::path p = tmp_dir() / name;
  std::ofstream out(p);
  out << content;
  return p;
}

}  // namespace

TEST_CASE("price ingestion happy path") {
  const auto p = write_file("prices_ok.csv",
                            "date,AAA,BBB\n"
                            "2020-01-01,100,50\n"
                            "2020-01-02,101,49\n"
                            "2020-01-03,102,51\n");
  const PriceCsv csv = ingest_prices(p.string());
  REQUIRE(csv.prices.rows() == 3);
  REQUIRE(csv.prices.cols() == 2);
  REQUIRE(csv.labels == std::vector<std::string>{"AAA", "BBB"});
  REQUIRE(csv.dropped_rows == 0);
}

TEST_CASE("price ingestion rejects bad rows with a row number") {
  const auto bad_date = write_file("prices_bad_date.csv",
                                   "date,AAA\n2020-01-02,100\n2020-01-01,101\n");
  REQUIRE_THROWS_WITH(ingest_prices(bad_date.string()),
                      Catch::Matchers::ContainsSubstring("row 3") &&
                          Catch::Matchers::ContainsSubstring("non-increasing"));

  const auto malformed = write_file("prices_malformed.csv",
                                    "date,AAA\n2020/01/01,100\n");
  REQUIRE_THROWS_WITH(ingest_prices(malformed.string()),
                      Catch::Matchers::ContainsSubstring("malformed date"));

  const auto negative = write_file("prices_negative.csv",
                                   "date,AAA\n2020-01-01,-3\n");
  REQUIRE_THROWS_WITH(ingest_prices(negative.string()),
                      Catch::Matchers::ContainsSubstring("non-positive"));

  const auto ragged = write_file("prices_ragged.csv",
                                 "date,AAA,BBB\n2020-01-01,100\n");
  REQUIRE_THROWS_WITH(ingest_prices(ragged.string()),
                      Catch::Matchers::ContainsSubstring("expected 3 fields"));
}

TEST_CASE("rows with missing cells are dropped and counted") {
  const auto p = write_file("prices_missing.csv",
                            "date,AAA,BBB\n"
                            "2020-01-01,100,50\n"
                            "2020-01-02,,49\n"
                            "2020-01-03,102,51\n");
  const PriceCsv csv = ingest_prices(p.string());
  REQUIRE(csv.prices.rows() == 2);
  REQUIRE(csv.dropped_rows == 1);
  REQUIRE(csv.dates == std::vector<std::string>{"2020-01-01", "2020-01-03"});
}

TEST_CASE("realized volatility hand value") {
  const auto p = write_file("prices_rv.csv",
                            "date,AAA\n2020-01-01,100\n2020-01-02,101\n");
  const PriceCsv csv = ingest_prices(p.string());
  const TimeSeriesPanel rv = realized_volatility(csv, /*log_rv=*/false);
  REQUIRE(rv.rows() == 1);
  // [100 log(1.01)]^2
  REQUIRE(rv.y(0, 0) == Catch::Approx(0.99009084087508668).epsilon(1e-12));
  REQUIRE(rv.dates[0] == "2020-01-02");

  const TimeSeriesPanel logrv = realized_volatility(csv, /*log_rv=*/true);
  REQUIRE(logrv.y(0, 0) == Catch::Approx(std::log(0.99009084087508668)));
}

TEST_CASE("constant prices floor the log transform") {
  const auto p = write_file("prices_const.csv",
                            "date,AAA\n2020-01-01,100\n2020-01-02,100\n");
  const PriceCsv csv = ingest_prices(p.string());
  REQUIRE(realized_volatility(csv, false).y(0, 0) == 0.0);
  REQUIRE(realized_volatility(csv, true).y(0, 0) == Catch::Approx(std::log(1e-12)));
}

TEST_CASE("realized volatility is nonnegative") {
  RngStream rng(801, 0);
  PriceCsv csv;
  csv.labels = {"A", "B"};
  csv.prices.resize(50, 2);
  double a = 100.0, b = 60.0;
  for (long t = 0; t < 50; ++t) {
    a *= std::exp(0.01 * rng.normal());
    b *= std::exp(0.02 * rng.normal());
    csv.prices(t, 0) = a;
    csv.prices(t, 1) = b;
    csv.dates.push_back(detail::synthetic_date(t));
  }
  const TimeSeriesPanel rv = realized_volatility(csv, false);
  REQUIRE(rv.y.minCoeff() >= 0.0);
  REQUIRE(rv.rows() == 49);
}

TEST_CASE("panel csv round trip is lossless") {
  RngStream rng(802, 0);
  TimeSeriesPanel panel;
  panel.y.resize(7, 3);
  for (long i = 0; i < 7; ++i) {
    for (long j = 0; j < 3; ++j) panel.y(i, j) = rng.normal() * 1e-3;
    panel.dates.push_back(detail::synthetic_date(i));
  }
  panel.m = Eigen::MatrixXd(7, 0);
  panel.labels = {"x", "y", "z"};
  const auto p = tmp_dir() / "panel_rt.csv";
  write_panel_csv(p.string(), panel);
  const TimeSeriesPanel back = read_panel_csv(p.string());
  REQUIRE((back.y - panel.y).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(back.labels == panel.labels);
  REQUIRE(back.dates == panel.dates);
}

TEST_CASE("truth and edges round trips") {
  RngStream rng(803, 0);
  const Eigen::MatrixXi graph = oracle::random_graph(6, 0.4, rng);
  const auto tp = tmp_dir() / "truth_rt.csv";
  write_truth_csv(tp.string(), graph);
  REQUIRE(read_truth_csv(tp.string()) == graph);

  PosteriorSummary summary;
  summary.edge_prob = Eigen::MatrixXd::Zero(6, 6);
  for (long i = 0; i < 6; ++i) {
    for (long j = i + 1; j < 6; ++j) {
      summary.edge_prob(i, j) = summary.edge_prob(j, i) = rng.uniform();
    }
  }
  summary.median_graph = (summary.edge_prob.array() > 0.5).cast<int>().matrix();
  const auto ep = tmp_dir() / "edges_rt.csv";
  write_edges_csv(ep.string(), summary);
  const EdgesFile back = read_edges_csv(ep.string());
  REQUIRE((back.edge_prob - summary.edge_prob).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(back.median_graph == summary.median_graph);
}

TEST_CASE("latent csv round trip") {
  RngStream rng(804, 0);
  Eigen::MatrixXd u(4, 2);
  for (long i = 0; i < 4; ++i) {
    u(i, 0) = rng.normal();
    u(i, 1) = rng.normal();
  }
  const auto p = tmp_dir() / "latent_rt.csv";
  write_latent_csv(p.string(), u, {"a", "b", "c", "d"});
  const LatentFile back = read_latent_csv(p.string());
  REQUIRE((back.u - u).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(back.labels == std::vector<std::string>{"a", "b", "c", "d"});
}

TEST_CASE("emit_outputs writes the full bundle") {
  PosteriorSummary summary;
  const long n = 3;
  summary.edge_prob = Eigen::MatrixXd::Zero(n, n);
  summary.edge_prob(0, 1) = summary.edge_prob(1, 0) = 0.8;
  summary.edge_prob(1, 2) = summary.edge_prob(2, 1) = 0.1;
  summary.median_graph = (summary.edge_prob.array() > 0.5).cast<int>().matrix();
  summary.has_lpm = true;
  summary.u_hat = Eigen::MatrixXd::Random(n, 2);
  summary.theta_mean = -0.4;
  summary.lambda_mean << 1.0, -2.0;
  summary.density_posterior_mean = 0.33;
  ChainTrace trace;
  trace.scores = {10.0, 9.5, 9.25};
  const fs::path dir = tmp_dir() / "emit";
  fs::remove_all(dir);
  FitConfig config;
  emit_outputs(summary, trace, dir.string(), {"a", "b", "c"}, config);

  REQUIRE(fs::exists(dir / "edges.csv"));
  REQUIRE(fs::exists(dir / "latent.csv"));
  REQUIRE(fs::exists(dir / "summary.json"));
  REQUIRE(fs::exists(dir / "trace.csv"));

  // n=3 -> exactly 3 data rows in edges.csv
  const auto lines = detail::read_all_lines((dir / "edges.csv").string());
  REQUIRE(lines.size() == 4);
  REQUIRE(lines[0] == "i,j,edge_prob,median_edge");

  const EdgesFile back = read_edges_csv((dir / "edges.csv").string());
  REQUIRE((back.edge_prob - summary.edge_prob).cwiseAbs().maxCoeff() == 0.0);

  std::ifstream in(dir / "summary.json");
  const json doc = json::parse(in);
  REQUIRE(doc["seed"] == config.seed);
  REQUIRE(doc["config"]["mode"] == "bcglpm1");
  REQUIRE(doc["theta_mean"].get<double>() == Catch::Approx(-0.4));
  REQUIRE(doc.contains("gcc"));
  REQUIRE(doc.contains("density"));
}

TEST_CASE("config file loading: json and toml agree and override flags") {
  const auto jp = write_file("cfg.json",
                             "{\"mode\":\"sssl\",\"iters\":123,\"v0\":0.05,"
                              "\"market_cols\":[\"SPX\",\"NDX\"],\"log_rv\":false}");
  const auto tp = write_file("cfg.toml",
                             "# comment\nmode = \"sssl\"\niters = 123\n"
                             "v0 = 0.05\nmarket_cols = [\"SPX\", \"NDX\"]\n"
                             "log_rv = false\n");
  RunConfig a, b;
  a.fit.n_iter = 999;  // flag value, overridden by the config file
  load_config_file(a, jp.string());
  load_config_file(b, tp.string());
  REQUIRE(a.fit.mode == ModelMode::sssl);
  REQUIRE(a.fit.n_iter == 123);
  REQUIRE(a.fit.v0 == 0.05);
  REQUIRE(a.market_cols == std::vector<std::string>{"SPX", "NDX"});
  REQUIRE(a.log_rv == false);
  REQUIRE(b.fit.mode == a.fit.mode);
  REQUIRE(b.fit.n_iter == a.fit.n_iter);
  REQUIRE(b.market_cols == a.market_cols);

  const auto bad = write_file("cfg_bad.json", "{\"nope\": 1}");
  RunConfig c;
  REQUIRE_THROWS_AS(load_config_file(c, bad.string()), validation_error);
  const auto badext = write_file("cfg.yaml", "a: 1");
  REQUIRE_THROWS_AS(load_config_file(c, badext.string()), validation_error);
}

TEST_CASE("toml sections flatten to dotted keys") {
  const auto tp = write_file("cfg_sections.toml", "[fit]\nx = 1\n");
  RunConfig c;
  REQUIRE_THROWS_WITH(load_config_file(c, tp.string()),
                      Catch::Matchers::ContainsSubstring("fit.x"));
}

TEST_CASE("split_market moves named columns") {
  TimeSeriesPanel panel;
  panel.y.resize(4, 3);
  panel.y << 1, 10, 100, 2, 20, 200, 3, 30, 300, 4, 40, 400;
  panel.m = Eigen::MatrixXd(4, 0);
  panel.labels = {"a", "mkt", "b"};
  const TimeSeriesPanel out = split_market(panel, {"mkt"});
  REQUIRE(out.n_series() == 2);
  REQUIRE(out.n_market() == 1);
  REQUIRE(out.labels == std::vector<std::string>{"a", "b"});
  REQUIRE(out.m(2, 0) == 30);
  REQUIRE(out.y(2, 1) == 300);
  REQUIRE_THROWS_AS(split_market(panel, {"missing"}), validation_error);
}

TEST_CASE("matrix csv round trip") {
  RngStream rng(805, 0);
  const Eigen::MatrixXd m = oracle::random_spd(4, rng);
  const auto p = tmp_dir() / "mat_rt.csv";
  write_matrix_csv(p.string(), m);
  REQUIRE((read_matrix_csv(p.string()) - m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("write_instance produces a loadable bundle") {
  DgpSpec spec;
  spec.n = 4;
  spec.t = 12;
  spec.setup = LagMode::lag1;
  spec.seed = 5;
  const PlantedInstance inst = generate(spec);
  const fs::path dir = tmp_dir() / "instance";
  fs::remove_all(dir);
  write_instance(dir.string(), inst, spec);
  const TimeSeriesPanel data = read_panel_csv((dir / "data.csv").string());
  REQUIRE(data.rows() == 12);
  REQUIRE(data.n_series() == 4);
  REQUIRE((data.y - inst.data).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(read_truth_csv((dir / "truth.csv").string()) == inst.true_graph);
  std::ifstream in(dir / "meta.json");
  const json meta = json::parse(in);
  REQUIRE(meta["setup"] == "lag1");
  REQUIRE(meta["a_true"].size() == 4);
}
