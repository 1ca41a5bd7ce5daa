#ifndef HOSIM_METRICS_HPP
#define HOSIM_METRICS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hosim {

// Counters and sample reservoirs behind the exported KPIs. Counters cover
// the post-warmup cohort: an attempt is counted when it happens after
// warm-up, and a session's completion/drop is counted iff its admission was.
struct MetricsAccumulator {
  int64_t attempts = 0;
  int64_t admitted = 0;
  int64_t blocked_coverage = 0;
  int64_t blocked_resource = 0;
  int64_t dropped = 0;
  int64_t completed = 0;

  std::vector<double> throughput_samples_bps;  // goodput of completed cohort sessions, bytes/s
  std::vector<double> sinr_samples_db;         // one per active user per post-warmup snapshot
  std::vector<double> hm_deviation_series_db;  // per-snapshot mean |HM - f0| over adjacent pairs
  std::vector<double> cell_load_sum;           // running sums of smoothed load, per cell
  int64_t load_snapshots = 0;

  void record_load_snapshot(const std::vector<double>& chi);
};

// Empirical quantiles by linear interpolation of the sorted samples.
// Samples need not be pre-sorted; quantiles must be in [0,1].
std::vector<double> sample_quantiles(std::vector<double> samples,
                                     const std::vector<double>& quantiles);

std::optional<double> access_probability(const MetricsAccumulator& acc);
std::optional<double> holding_probability(const MetricsAccumulator& acc);
std::optional<double> mean_user_throughput_Bps(const MetricsAccumulator& acc);
std::vector<std::pair<double, double>> sinr_cdf(const MetricsAccumulator& acc,
                                                const std::vector<double>& quantiles);

struct MetricsReport {
  int64_t attempts = 0;
  int64_t admitted = 0;
  int64_t blocked_coverage = 0;
  int64_t blocked_resource = 0;
  int64_t dropped = 0;
  int64_t completed = 0;
  std::optional<double> access_probability;
  std::optional<double> holding_probability;
  std::optional<double> mean_user_throughput_Bps;  // bytes per second
  std::vector<std::pair<double, double>> sinr_cdf;  // (quantile, dB), non-decreasing
  std::optional<double> median_sinr_db;
  double mean_abs_hm_deviation_db = 0.0;
  std::vector<double> per_cell_mean_load;
  uint64_t event_hash = 0;

  bool operator==(const MetricsReport&) const = default;
};

// Quantile grid used for exported CDF tables: 0.01 .. 0.99 step 0.01.
std::vector<double> default_quantile_grid();

MetricsReport finalize_report(const MetricsAccumulator& acc, uint64_t event_hash);

// One row of the sweep summary CSV.
struct RunSummary {
  double lambda = 0.0;
  std::string policy;  // "auto" | "fixed"
  uint64_t seed = 0;
  std::optional<double> access_prob;
  std::optional<double> holding_prob;
  std::optional<double> mean_throughput;  // bytes/s
  std::optional<double> median_sinr_db;
  double mean_abs_hm_deviation = 0.0;

  bool operator==(const RunSummary&) const = default;
};

RunSummary make_summary(double lambda, const std::string& policy, uint64_t seed,
                        const MetricsReport& report);

// CSV schemas. Column orders are fixed:
//   summary:  lambda,policy,seed,access_prob,holding_prob,mean_throughput,
//             median_sinr_db,mean_abs_hm_deviation
//   sinr cdf: quantile,db
// Absent values are empty fields. Numbers round-trip exactly.
void write_summary_csv(const std::vector<RunSummary>& rows, const std::string& path);
std::vector<RunSummary> read_summary_csv(const std::string& path);

void write_sinr_cdf_csv(const std::vector<std::pair<double, double>>& cdf,
                        const std::string& path);
std::vector<std::pair<double, double>> read_sinr_cdf_csv(const std::string& path);

void write_cell_loads_csv(const std::vector<double>& mean_loads, const std::string& path);

// Shared numeric formatting: shortest decimal form that parses back to the
// same double ("%.17g" fallback).
std::string format_double(double v);

}  // namespace hosim

#endif
