#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/app.hpp"
#include "hosim/metrics.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "missing file: ", path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path tmp_dir(const std::string& name) {
  const auto dir = fs::path(HOSIM_BINARY_DIR) / "test_tmp" / "cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// 4-cell scenario small enough for CLI round trips
fs::path write_tiny_scenario(const fs::path& dir, double arrival_rate = 2.0) {
  const fs::path path = dir / "tiny.scn";
  std::ofstream out(path);
  out << "[general]\n"
         "snapshot_duration_s = 1\n"
         "sim_duration_s = 40\n"
         "rng_seed = 11\n"
         "[traffic]\n"
      << "arrival_rate = " << arrival_rate << "\n"
      << "file_size_bytes = 2e6\n"
         "[layout]\n"
         "n_sites = 4\n"
         "jitter_m = 80\n"
         "seed = 2\n"
         "[hotspots]\n"
         "0 4.0\n";
  return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help text matches the golden file") {
  const std::string golden =
      read_file(fs::path(HOSIM_SOURCE_DIR) / "tests" / "golden" / "cli_help.txt");
  CHECK(hosim::cli::help_text() == golden);
}

TEST_CASE("validate passes the planned margins and rejects broken ones") {
  CHECK(hosim::cli::run_cli({"validate", "--f0", "6", "--hm-min", "0", "--hm-max", "12",
                             "--order", "1"}) == 0);
  CHECK(hosim::cli::run_cli({"validate", "--order", "0"}) == 0);
  // non-midpoint f0 passes the theorem checks (no clamping in range)
  CHECK(hosim::cli::run_cli({"validate", "--f0", "8"}) == 0);
  // heavy clamping breaks the symmetry condition
  CHECK(hosim::cli::run_cli({"validate", "--f0", "2"}) == 1);
  // inconsistent bounds are a validation failure
  CHECK(hosim::cli::run_cli({"validate", "--f0", "20"}) == 1);
}

TEST_CASE("run writes the documented outputs and is reproducible") {
  const auto dir = tmp_dir("run");
  const auto scenario = write_tiny_scenario(dir);
  const auto out1 = dir / "out1";
  const auto out2 = dir / "out2";

  CHECK(hosim::cli::run_cli({"run", "--scenario", scenario.string(), "--policy", "fixed",
                             "--seed", "5", "--out", out1.string(), "--event-log"}) == 0);
  for (const char* name : {"summary.csv", "sinr_cdf.csv", "cell_loads.csv", "layout.csv",
                           "events.csv"}) {
    CHECK_MESSAGE(fs::exists(out1 / name), name);
  }

  const auto rows = hosim::read_summary_csv((out1 / "summary.csv").string());
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].policy == "fixed");
  CHECK(rows[0].seed == 5);
  REQUIRE(rows[0].holding_prob.has_value());
  CHECK(*rows[0].holding_prob >= 0.0);
  CHECK(*rows[0].holding_prob <= 1.0);

  CHECK(hosim::cli::run_cli({"run", "--scenario", scenario.string(), "--policy", "fixed",
                             "--seed", "5", "--out", out2.string(), "--event-log"}) == 0);
  for (const char* name : {"summary.csv", "sinr_cdf.csv", "events.csv"}) {
    CHECK(read_file(out1 / name) == read_file(out2 / name));
  }
}

TEST_CASE("missing scenario files fail with a diagnostic naming the path") {
  const int code = hosim::cli::run_cli({"run", "--scenario", "/no/such/file.scn"});
  CHECK(code != 0);
}

TEST_CASE("a bad scenario is a validation failure with exit 1") {
  const auto dir = tmp_dir("bad");
  const fs::path path = dir / "bad.scn";
  {
    std::ofstream out(path);
    out << "[traffic]\narrival_rate = 1\n[layout]\nn_sites = 1\n[radio]\nmax_prb_per_user = 0\n";
  }
  CHECK(hosim::cli::run_cli({"run", "--scenario", path.string()}) == 1);
}

TEST_CASE("sweep covers the lambda x seed x policy grid") {
  const auto dir = tmp_dir("sweep");
  const auto scenario = write_tiny_scenario(dir);
  const auto out = dir / "out";
  CHECK(hosim::cli::run_cli({"sweep", "--scenario", scenario.string(), "--lambdas", "1,2",
                             "--seeds", "3", "--out", out.string(), "--jobs", "2"}) == 0);

  const auto rows = hosim::read_summary_csv((out / "sweep_summary.csv").string());
  CHECK(rows.size() == 4);  // 2 lambdas x 1 seed x 2 policies

  for (const char* name : {"access_probability.svg", "holding_probability.svg",
                           "mean_throughput.svg", "sinr_cdf_l1_s3_fixed.csv",
                           "sinr_cdf_l2_s3_auto.csv"}) {
    CHECK_MESSAGE(fs::exists(out / name), name);
  }
}

TEST_CASE("a degenerate sweep equals two single runs") {
  const auto dir = tmp_dir("degenerate");
  const auto scenario = write_tiny_scenario(dir, 2.0);

  const auto sweep_out = dir / "sweep";
  CHECK(hosim::cli::run_cli({"sweep", "--scenario", scenario.string(), "--lambdas", "2",
                             "--seeds", "9", "--out", sweep_out.string()}) == 0);
  auto sweep_rows = hosim::read_summary_csv((sweep_out / "sweep_summary.csv").string());
  REQUIRE(sweep_rows.size() == 2);

  for (const std::string policy : {"fixed", "auto"}) {
    const auto run_out = dir / ("run_" + policy);
    CHECK(hosim::cli::run_cli({"run", "--scenario", scenario.string(), "--policy", policy,
                               "--seed", "9", "--out", run_out.string()}) == 0);
    const auto run_rows = hosim::read_summary_csv((run_out / "summary.csv").string());
    REQUIRE(run_rows.size() == 1);
    bool found = false;
    for (const auto& row : sweep_rows) found = found || row == run_rows[0];
    CHECK_MESSAGE(found, "sweep row missing for policy ", policy);
  }
}

TEST_CASE("charts regenerate byte-identically from the summary CSV alone") {
  const auto dir = tmp_dir("charts");
  const auto scenario = write_tiny_scenario(dir);
  const auto out = dir / "out";
  REQUIRE(hosim::cli::run_cli({"sweep", "--scenario", scenario.string(), "--lambdas", "1,2,3",
                               "--seeds", "1,2", "--out", out.string()}) == 0);

  // rendering again from the CSV gives the same bytes
  const auto again = dir / "again";
  fs::create_directories(again);
  fs::copy(out / "sweep_summary.csv", again / "sweep_summary.csv");
  REQUIRE(hosim::cli::run_cli({"sweep", "--scenario", scenario.string(), "--lambdas", "1,2,3",
                               "--seeds", "1,2", "--out", again.string()}) == 0);
  for (const char* name :
       {"access_probability.svg", "holding_probability.svg", "mean_throughput.svg"}) {
    CHECK(read_file(out / name) == read_file(again / name));
  }
}

}  // TEST_SUITE
