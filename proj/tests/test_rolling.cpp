#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "bcglpm/dgp.hpp"
#include "bcglpm/rolling.hpp"

using namespace bcglpm;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TimeSeriesPanel toy_panel(long t, long n, std::uint64_t seed) {
  DgpSpec spec;
  spec.n = n;
  spec.t = t;
  spec.setup = LagMode::lag0;
  spec.seed = seed;
  const PlantedInstance inst = generate(spec);
  TimeSeriesPanel panel;
  panel.y = inst.data;
  panel.m = Eigen::MatrixXd(t, 0);
  for (long i = 0; i < t; ++i) panel.dates.push_back(detail::synthetic_date(i));
  for (long j = 0; j < n; ++j) panel.labels.push_back("s" + std::to_string(j));
  return panel;
}

}  // namespace

TEST_CASE("window plan arithmetic") {
  const WindowPlan plan = make_window_plan(300, 252, 21);
  REQUIRE(plan.ranges.size() == 3);
  REQUIRE(plan.ranges[0] == std::pair<long, long>(0, 252));
  REQUIRE(plan.ranges[2] == std::pair<long, long>(42, 252));
  REQUIRE_THROWS_AS(make_window_plan(100, 252, 21), validation_error);
  REQUIRE_THROWS_AS(make_window_plan(100, 50, 0), validation_error);
}

TEST_CASE("window count matches the closed form for many shapes") {
  RngStream rng(901, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const long t = 50 + static_cast<long>(rng.uniform_index(500));
    const long len = 2 + static_cast<long>(rng.uniform_index(t - 1));
    const long step = 1 + static_cast<long>(rng.uniform_index(40));
    const WindowPlan plan = make_window_plan(t, len, step);
    REQUIRE(static_cast<long>(plan.ranges.size()) == (t - len) / step + 1);
    for (const auto& [first, count] : plan.ranges) {
      REQUIRE(first + count <= t);
      REQUIRE(count == len);
    }
  }
}

TEST_CASE("rolling fit writes per-window dirs and the four series files") {
  const TimeSeriesPanel panel = toy_panel(80, 5, 111);
  const fs::path dir = fs::temp_directory_path() / "bcglpm_roll_test";
  fs::remove_all(dir);
  RunConfig config;
  config.out_dir = dir.string();
  config.fit.mode = ModelMode::bcglpm0;
  config.fit.n_iter = 300;
  config.fit.burn_in = 100;
  config.fit.n_chains = 1;
  config.fit.seed = 3;
  const WindowPlan plan = make_window_plan(panel.rows(), 60, 20);
  REQUIRE(plan.ranges.size() == 2);
  const RollingResult rolled = rolling_fit(panel, plan, config);
  REQUIRE(rolled.windows.size() == 2);
  REQUIRE(fs::exists(dir / "window_000" / "summary.json"));
  REQUIRE(fs::exists(dir / "window_001" / "summary.json"));
  REQUIRE(fs::exists(dir / "density.csv"));
  REQUIRE(fs::exists(dir / "std_density.csv"));
  REQUIRE(fs::exists(dir / "gcc.csv"));
  REQUIRE(fs::exists(dir / "procrustes.csv"));
  REQUIRE(fs::exists(dir / "rolling_summary.json"));
  REQUIRE(rolled.procrustes_d.size() == 1);
  fs::remove_all(dir);
}

TEST_CASE("sssl mode emits no latent outputs") {
  const TimeSeriesPanel panel = toy_panel(70, 4, 17);
  const fs::path dir = fs::temp_directory_path() / "bcglpm_roll_sssl";
  fs::remove_all(dir);
  RunConfig config;
  config.out_dir = dir.string();
  config.fit.mode = ModelMode::sssl;
  config.fit.n_iter = 200;
  config.fit.burn_in = 50;
  config.fit.n_chains = 1;
  const WindowPlan plan = make_window_plan(panel.rows(), 50, 20);
  rolling_fit(panel, plan, config);
  REQUIRE_FALSE(fs::exists(dir / "window_000" / "latent.csv"));
  REQUIRE_FALSE(fs::exists(dir / "procrustes.csv"));
  REQUIRE(fs::exists(dir / "density.csv"));
  fs::remove_all(dir);
}

TEST_CASE("rolling is deterministic and independent of the job count") {
  const TimeSeriesPanel panel = toy_panel(70, 4, 55);
  const WindowPlan plan = make_window_plan(panel.rows(), 50, 10);
  auto run = [&](const fs::path& dir, int jobs) {
    fs::remove_all(dir);
    RunConfig config;
    config.out_dir = dir.string();
    config.jobs = jobs;
    config.fit.mode = ModelMode::bcglpm0;
    config.fit.n_iter = 150;
    config.fit.burn_in = 50;
    config.fit.n_chains = 1;
    config.fit.seed = 12;
    rolling_fit(panel, plan, config);
  };
  const fs::path d1 = fs::temp_directory_path() / "bcglpm_roll_a";
  const fs::path d2 = fs::temp_directory_path() / "bcglpm_roll_b";
  run(d1, 1);
  run(d2, 2);
  for (int w = 0; w < 3; ++w) {
    const std::string name = "window_00" + std::to_string(w);
    REQUIRE(slurp(d1 / name / "trace.csv") == slurp(d2 / name / "trace.csv"));
    REQUIRE(slurp(d1 / name / "edges.csv") == slurp(d2 / name / "edges.csv"));
  }
  REQUIRE(slurp(d1 / "density.csv") == slurp(d2 / "density.csv"));
  fs::remove_all(d1);
  fs::remove_all(d2);
}
