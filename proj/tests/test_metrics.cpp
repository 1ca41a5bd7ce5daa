#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "hosim/metrics.hpp"
#include "hosim/rng.hpp"

using namespace hosim;

namespace {

std::string tmp_path(const std::string& name) {
  const auto dir = std::filesystem::path(HOSIM_BINARY_DIR) / "test_tmp" / "metrics";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("access probability is admitted over attempts") {
  MetricsAccumulator acc;
  acc.attempts = 100;
  acc.admitted = 95;
  CHECK(*access_probability(acc) == doctest::Approx(0.95));

  acc.admitted = 100;
  CHECK(*access_probability(acc) == doctest::Approx(1.0));
  acc.admitted = 0;
  CHECK(*access_probability(acc) == doctest::Approx(0.0));

  MetricsAccumulator empty;
  CHECK_FALSE(access_probability(empty).has_value());
}

TEST_CASE("holding probability is the complement of the drop rate") {
  MetricsAccumulator acc;
  acc.admitted = 200;
  acc.dropped = 0;
  CHECK(*holding_probability(acc) == doctest::Approx(1.0));
  acc.dropped = 2;
  CHECK(*holding_probability(acc) == doctest::Approx(0.99));
  acc.dropped = 200;
  CHECK(*holding_probability(acc) == doctest::Approx(0.0));

  MetricsAccumulator empty;
  CHECK_FALSE(holding_probability(empty).has_value());
}

TEST_CASE("mean throughput averages completed-session goodput") {
  MetricsAccumulator acc;
  acc.throughput_samples_bps.push_back(5e6 / 5.0);  // 5 MB in 5 s
  CHECK(*mean_user_throughput_Bps(acc) == doctest::Approx(1e6));

  acc.throughput_samples_bps.assign(10, 123456.0);
  CHECK(*mean_user_throughput_Bps(acc) == doctest::Approx(123456.0));

  MetricsAccumulator empty;
  CHECK_FALSE(mean_user_throughput_Bps(empty).has_value());
}

TEST_CASE("quantiles interpolate the sorted samples") {
  CHECK(sample_quantiles({7.0, 7.0, 7.0}, {0.1, 0.5, 0.9}) ==
        std::vector<double>{7.0, 7.0, 7.0});
  CHECK(sample_quantiles({10.0, 0.0}, {0.5})[0] == doctest::Approx(5.0));
  CHECK(sample_quantiles({1.0, 2.0, 3.0, 4.0}, {0.0})[0] == 1.0);
  CHECK(sample_quantiles({1.0, 2.0, 3.0, 4.0}, {1.0})[0] == 4.0);
  CHECK_THROWS(sample_quantiles({}, {0.5}));
  CHECK_THROWS(sample_quantiles({1.0}, {1.5}));
}

TEST_CASE("the sinr cdf is non-decreasing over quantiles") {
  MetricsAccumulator acc;
  Rng rng(88);
  for (int i = 0; i < 1000; ++i) acc.sinr_samples_db.push_back(rng.normal(10.0, 6.0));
  const auto cdf = sinr_cdf(acc, default_quantile_grid());
  REQUIRE(cdf.size() == 99);
  for (size_t i = 1; i < cdf.size(); ++i) {
    CHECK(cdf[i].first > cdf[i - 1].first);
    CHECK(cdf[i].second >= cdf[i - 1].second);
  }
}

TEST_CASE("finalize keeps the counter conservation identity") {
  MetricsAccumulator acc;
  acc.attempts = 50;
  acc.admitted = 40;
  acc.blocked_coverage = 4;
  acc.blocked_resource = 6;
  acc.completed = 30;
  acc.dropped = 1;
  const auto report = finalize_report(acc, 0xabcd);
  CHECK(report.attempts == report.admitted + report.blocked_coverage + report.blocked_resource);
  CHECK(report.completed + report.dropped <= report.admitted);
  CHECK(report.event_hash == 0xabcd);
}

TEST_CASE("doubles round-trip through the shared formatter") {
  Rng rng(4);
  const double specials[] = {0.0,    -0.0,       0.1,    1.0 / 3.0, 1e300,
                             5e-324, 1.5e-308,   123.456, 720e3,    -132.24};
  for (const double v : specials) {
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  for (int i = 0; i < 2000; ++i) {
    const double v = (rng.uniform01() - 0.5) * std::pow(10.0, rng.uniform(-30.0, 30.0));
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("summary rows round-trip through CSV") {
  Rng rng(17);
  std::vector<RunSummary> rows;
  for (int i = 0; i < 60; ++i) {
    RunSummary r;
    r.lambda = rng.uniform(0.1, 20.0);
    r.policy = rng.uniform01() < 0.5 ? "auto" : "fixed";
    r.seed = rng.next_u64() % 1000;
    if (rng.uniform01() < 0.9) r.access_prob = rng.uniform01();
    if (rng.uniform01() < 0.9) r.holding_prob = rng.uniform01();
    if (rng.uniform01() < 0.9) r.mean_throughput = rng.uniform(0.0, 2e6);
    if (rng.uniform01() < 0.9) r.median_sinr_db = rng.uniform(-10.0, 40.0);
    r.mean_abs_hm_deviation = rng.uniform(0.0, 6.0);
    rows.push_back(r);
  }
  const std::string path = tmp_path("summary_roundtrip.csv");
  write_summary_csv(rows, path);
  CHECK(read_summary_csv(path) == rows);
}

TEST_CASE("sinr cdf tables round-trip through CSV") {
  std::vector<std::pair<double, double>> cdf;
  Rng rng(23);
  double v = -20.0;
  for (int i = 1; i <= 99; ++i) {
    v += rng.uniform01() * 2.0;
    cdf.emplace_back(i / 100.0, v);
  }
  const std::string path = tmp_path("cdf_roundtrip.csv");
  write_sinr_cdf_csv(cdf, path);
  CHECK(read_sinr_cdf_csv(path) == cdf);
}

TEST_CASE("load snapshots accumulate per-cell means") {
  MetricsAccumulator acc;
  acc.record_load_snapshot({0.2, 0.4});
  acc.record_load_snapshot({0.4, 0.8});
  const auto report = finalize_report(acc, 0);
  REQUIRE(report.per_cell_mean_load.size() == 2);
  CHECK(report.per_cell_mean_load[0] == doctest::Approx(0.3));
  CHECK(report.per_cell_mean_load[1] == doctest::Approx(0.6));
}

}  // TEST_SUITE
