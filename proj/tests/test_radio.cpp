#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "hosim/radio.hpp"
#include "hosim/rng.hpp"

using namespace hosim;

namespace {

InterferenceMatrix full_lambda(int n) {
  InterferenceMatrix lambda(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) lambda.set(i, j, i != j);
  return lambda;
}

std::vector<PrbClaim> claims_of(int n) {
  std::vector<PrbClaim> claims(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    claims[static_cast<size_t>(i)] = {i, static_cast<double>(i)};
  }
  return claims;
}

}  // namespace

TEST_SUITE("radio") {

TEST_CASE("interference vanishes with idle cells or disjoint bands") {
  const std::vector<double> rx = {-80.0, -90.0, -95.0};
  const std::vector<double> idle = {0.0, 0.0, 0.0};
  CHECK(interference_per_subcarrier_w(0, rx, full_lambda(3), idle) == 0.0);

  InterferenceMatrix alone(3);  // serving cell alone on its band
  const std::vector<double> busy = {1.0, 1.0, 1.0};
  CHECK(interference_per_subcarrier_w(0, rx, alone, busy) == 0.0);
}

TEST_CASE("interference is the load-weighted sum of interferer powers") {
  // powers chosen in watts: 4e-11 and 1e-11, loads 0.5 and 1.0 -> 3e-11
  const std::vector<double> rx = {-60.0, watts_to_dbm(4e-11), watts_to_dbm(1e-11)};
  const std::vector<double> loads = {0.9, 0.5, 1.0};
  const double interference = interference_per_subcarrier_w(0, rx, full_lambda(3), loads);
  CHECK(interference == doctest::Approx(3e-11).epsilon(1e-12));
}

TEST_CASE("sinr follows signal over interference plus noise") {
  const std::vector<double> rx = {watts_to_dbm(1e-10), watts_to_dbm(2e-11)};
  const std::vector<double> loads = {0.0, 1.0};
  const double sinr = sinr_linear(0, rx, full_lambda(2), loads, 1e-16);
  CHECK(std::abs(sinr - 5.0) / 5.0 < 1e-4);

  // no interference, signal equal to noise
  const double noise_w = 1e-13;
  const std::vector<double> rx2 = {watts_to_dbm(noise_w), -300.0};
  const std::vector<double> idle = {0.0, 0.0};
  CHECK(sinr_linear(0, rx2, full_lambda(2), idle, noise_w) == doctest::Approx(1.0));
}

TEST_CASE("doubling every load at most halves the sinr") {
  Rng rng(31337);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + rng.uniform_int(5);
    std::vector<double> rx(static_cast<size_t>(n));
    std::vector<double> loads(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      rx[static_cast<size_t>(i)] = rng.uniform(-120.0, -60.0);
      loads[static_cast<size_t>(i)] = rng.uniform(0.0, 0.5);
    }
    std::vector<double> doubled = loads;
    for (auto& chi : doubled) chi *= 2.0;
    const double noise_w = dbm_to_watts(-132.24);
    const double base = sinr_linear(0, rx, full_lambda(n), loads, noise_w);
    const double heavy = sinr_linear(0, rx, full_lambda(n), doubled, noise_w);
    CHECK(heavy >= base / 2.0 - 1e-15);
  }
}

TEST_CASE("interference and sinr match a brute-force oracle") {
  // independent straight-line evaluation on random small instances
  Rng rng(777);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + rng.uniform_int(5);
    std::vector<double> rx(static_cast<size_t>(n));
    std::vector<double> loads(static_cast<size_t>(n));
    InterferenceMatrix lambda(n);
    for (int i = 0; i < n; ++i) {
      rx[static_cast<size_t>(i)] = rng.uniform(-130.0, -50.0);
      loads[static_cast<size_t>(i)] = rng.uniform01();
      for (int j = 0; j < n; ++j) lambda.set(i, j, i != j && rng.uniform01() < 0.6);
    }
    const int serving = rng.uniform_int(n);
    const double noise_w = dbm_to_watts(rng.uniform(-140.0, -120.0));

    double oracle_i = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k == serving || lambda.at(serving, k) == 0) continue;
      oracle_i += loads[static_cast<size_t>(k)] *
                  std::pow(10.0, (rx[static_cast<size_t>(k)] - 30.0) / 10.0);
    }
    const double oracle_sinr =
        std::pow(10.0, (rx[static_cast<size_t>(serving)] - 30.0) / 10.0) /
        (oracle_i + noise_w);

    const double got_i = interference_per_subcarrier_w(serving, rx, lambda, loads);
    const double got_sinr = sinr_linear(serving, rx, lambda, loads, noise_w);
    if (oracle_i > 0) CHECK(std::abs(got_i - oracle_i) <= 1e-12 * oracle_i);
    else CHECK(got_i == 0.0);
    CHECK(std::abs(got_sinr - oracle_sinr) <= 1e-12 * oracle_sinr);
  }
}

TEST_CASE("link curve maps sinr to bounded throughput") {
  LinkCurve curve;
  CHECK(throughput_per_prb(0.0, curve) == 0.0);
  CHECK(throughput_per_prb(1e12, curve) == curve.max_throughput_per_prb_bps);
  // at sinr == sinr_efficiency the log term is exactly 1
  const double knee = throughput_per_prb(curve.sinr_efficiency, curve);
  CHECK(knee == doctest::Approx(curve.bandwidth_efficiency * curve.prb_bandwidth_hz));
}

TEST_CASE("link curve is monotone in sinr") {
  LinkCurve curve;
  Rng rng(55);
  for (int trial = 0; trial < 500; ++trial) {
    const double a = rng.uniform(0.0, 1e4);
    const double b = rng.uniform(0.0, 1e4);
    const double lo = std::min(a, b), hi = std::max(a, b);
    CHECK(throughput_per_prb(lo, curve) <= throughput_per_prb(hi, curve));
  }
}

TEST_CASE("tabulated link curve interpolates and clamps") {
  LinkCurve curve;
  curve.table = {{-10.0, 0.0}, {0.0, 100e3}, {20.0, 700e3}};
  // below and above the table
  CHECK(throughput_per_prb(db_to_linear(-30.0), curve) == 0.0);
  CHECK(throughput_per_prb(db_to_linear(35.0), curve) == 700e3);
  // midpoint of the first segment
  CHECK(throughput_per_prb(db_to_linear(-5.0), curve) == doctest::Approx(50e3));
  // the configured cap still applies
  curve.max_throughput_per_prb_bps = 600e3;
  CHECK(throughput_per_prb(db_to_linear(20.0), curve) == 600e3);
}

TEST_CASE("link curve CSV loader rejects bad tables") {
  namespace fs = std::filesystem;
  const auto dir = fs::path(HOSIM_BINARY_DIR) / "test_tmp" / "radio";
  fs::create_directories(dir);
  const auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream out(dir / name);
    out << body;
    return (dir / name).string();
  };

  const auto good = load_link_curve_csv(
      write("good.csv", "# sinr_db,bps\n-10,0\n0,100e3\n20,700e3\n"));
  CHECK(good.size() == 3);
  CHECK_THROWS(load_link_curve_csv(write("nonzero.csv", "-10,5\n0,100\n")));
  CHECK_THROWS(load_link_curve_csv(write("unsorted.csv", "-10,0\n-20,100\n")));
  CHECK_THROWS(load_link_curve_csv(write("empty.csv", "# nothing\n")));
  CHECK_THROWS(load_link_curve_csv("/nonexistent.csv"));
}

TEST_CASE("user throughput scales with allocated PRBs") {
  CHECK(user_throughput_bps(4, 500e3) == doctest::Approx(2e6));
  CHECK(user_throughput_bps(1, 123.0) == 123.0);
  CHECK(user_throughput_bps(0, 1e6) == 0.0);
}

TEST_CASE("reallocation fills up to max and leaves the rest idle") {
  const auto alloc = reallocate_prbs(claims_of(3), 25, 1, 4);
  REQUIRE(alloc.size() == 3);
  for (const int a : alloc) CHECK(a == 4);
}

TEST_CASE("reallocation pins everyone at the minimum when full") {
  const auto alloc = reallocate_prbs(claims_of(25), 25, 1, 4);
  REQUIRE(alloc.size() == 25);
  for (const int a : alloc) CHECK(a == 1);
}

TEST_CASE("reallocation of an empty cell is empty; infeasible demand throws") {
  CHECK(reallocate_prbs({}, 25, 1, 4).empty());
  CHECK_THROWS_AS(reallocate_prbs(claims_of(26), 25, 1, 4), ValidationError);
}

TEST_CASE("reallocation spreads the remainder in arrival order") {
  // 25 PRBs over 7 users: 4 users get 4, then 3 users get 3
  const auto alloc = reallocate_prbs(claims_of(7), 25, 1, 4);
  CHECK(std::accumulate(alloc.begin(), alloc.end(), 0) == 25);
  CHECK(alloc == std::vector<int>{4, 4, 4, 4, 3, 3, 3});
}

TEST_CASE("reallocation is maximal and respects bounds on random instances") {
  Rng rng(909);
  for (int trial = 0; trial < 300; ++trial) {
    const int capacity = 1 + rng.uniform_int(40);
    const int min_prb = 1 + rng.uniform_int(3);
    const int max_prb = min_prb + rng.uniform_int(5);
    const int max_users = capacity / min_prb;
    const int n = rng.uniform_int(max_users + 1);
    const auto alloc = reallocate_prbs(claims_of(n), capacity, min_prb, max_prb);

    int total = 0;
    bool all_at_max = true;
    for (const int a : alloc) {
      CHECK(a >= min_prb);
      CHECK(a <= max_prb);
      total += a;
      all_at_max = all_at_max && a == max_prb;
    }
    CHECK(total <= capacity);
    // maximal: either the cell is exhausted or everyone is at max
    if (n > 0) CHECK((total == capacity || all_at_max));
  }
}

TEST_CASE("load smoothing follows the EMA contract") {
  CHECK(update_load(0.3, 0.8, 1.0) == 0.8);  // no memory at alpha 1

  // constant occupancy converges within 1e-6 after the geometric bound
  const double alpha = 0.05;
  const double target = 0.7;
  const int n_steps = static_cast<int>(std::ceil(std::log(1e-6) / std::log(1.0 - alpha)));
  double chi = 0.0;
  for (int i = 0; i < n_steps; ++i) chi = update_load(chi, target, alpha);
  CHECK(std::abs(chi - target) < 1e-6);

  // zero occupancy decays monotonically from 1
  chi = 1.0;
  for (int i = 0; i < 100; ++i) {
    const double next = update_load(chi, 0.0, 0.1);
    CHECK(next < chi);
    CHECK(next >= 0.0);
    chi = next;
  }
}

TEST_CASE("vector load update stays within [0,1]") {
  LoadVector loads;
  loads.chi = {0.0, 0.5, 1.0};
  const std::vector<double> occupancy = {1.0, 0.25, 0.0};
  update_loads(loads, occupancy, 0.2);
  for (const double chi : loads.chi) {
    CHECK(chi >= 0.0);
    CHECK(chi <= 1.0);
  }
  CHECK(loads.chi[1] == doctest::Approx(0.45));
}

}  // TEST_SUITE
