#include "hosim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace hosim {

std::string format_double(double v) {
  char buf[40];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

void MetricsAccumulator::record_load_snapshot(const std::vector<double>& chi) {
  if (cell_load_sum.empty()) cell_load_sum.assign(chi.size(), 0.0);
  for (size_t i = 0; i < chi.size(); ++i) cell_load_sum[i] += chi[i];
  ++load_snapshots;
}

std::vector<double> sample_quantiles(std::vector<double> samples,
                                     const std::vector<double>& quantiles) {
  if (samples.empty()) throw std::invalid_argument("sample_quantiles: no samples");
  std::sort(samples.begin(), samples.end());
  std::vector<double> out;
  out.reserve(quantiles.size());
  const size_t n = samples.size();
  for (const double q : quantiles) {
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("sample_quantiles: quantile outside [0,1]");
    const double position = q * static_cast<double>(n - 1);
    const size_t lo = static_cast<size_t>(position);
    const size_t hi = std::min(lo + 1, n - 1);
    const double w = position - static_cast<double>(lo);
    out.push_back(samples[lo] + w * (samples[hi] - samples[lo]));
  }
  return out;
}

std::optional<double> access_probability(const MetricsAccumulator& acc) {
  if (acc.attempts == 0) return std::nullopt;
  return static_cast<double>(acc.admitted) / static_cast<double>(acc.attempts);
}

std::optional<double> holding_probability(const MetricsAccumulator& acc) {
  if (acc.admitted == 0) return std::nullopt;
  return 1.0 - static_cast<double>(acc.dropped) / static_cast<double>(acc.admitted);
}

std::optional<double> mean_user_throughput_Bps(const MetricsAccumulator& acc) {
  if (acc.throughput_samples_bps.empty()) return std::nullopt;
  double sum = 0.0;
  for (const double v : acc.throughput_samples_bps) sum += v;
  return sum / static_cast<double>(acc.throughput_samples_bps.size());
}

std::vector<std::pair<double, double>> sinr_cdf(const MetricsAccumulator& acc,
                                                const std::vector<double>& quantiles) {
  if (acc.sinr_samples_db.empty()) return {};
  const auto values = sample_quantiles(acc.sinr_samples_db, quantiles);
  std::vector<std::pair<double, double>> cdf;
  cdf.reserve(quantiles.size());
  for (size_t i = 0; i < quantiles.size(); ++i) cdf.emplace_back(quantiles[i], values[i]);
  return cdf;
}

std::vector<double> default_quantile_grid() {
  std::vector<double> q;
  for (int i = 1; i <= 99; ++i) q.push_back(i / 100.0);
  return q;
}

MetricsReport finalize_report(const MetricsAccumulator& acc, uint64_t event_hash) {
  MetricsReport report;
  report.attempts = acc.attempts;
  report.admitted = acc.admitted;
  report.blocked_coverage = acc.blocked_coverage;
  report.blocked_resource = acc.blocked_resource;
  report.dropped = acc.dropped;
  report.completed = acc.completed;
  report.access_probability = access_probability(acc);
  report.holding_probability = holding_probability(acc);
  report.mean_user_throughput_Bps = mean_user_throughput_Bps(acc);
  report.sinr_cdf = sinr_cdf(acc, default_quantile_grid());
  if (!acc.sinr_samples_db.empty()) {
    report.median_sinr_db = sample_quantiles(acc.sinr_samples_db, {0.5})[0];
  }
  double dev_sum = 0.0;
  for (const double v : acc.hm_deviation_series_db) dev_sum += v;
  report.mean_abs_hm_deviation_db =
      acc.hm_deviation_series_db.empty()
          ? 0.0
          : dev_sum / static_cast<double>(acc.hm_deviation_series_db.size());
  if (acc.load_snapshots > 0) {
    report.per_cell_mean_load.reserve(acc.cell_load_sum.size());
    for (const double sum : acc.cell_load_sum) {
      report.per_cell_mean_load.push_back(sum / static_cast<double>(acc.load_snapshots));
    }
  }
  report.event_hash = event_hash;
  return report;
}

RunSummary make_summary(double lambda, const std::string& policy, uint64_t seed,
                        const MetricsReport& report) {
  RunSummary row;
  row.lambda = lambda;
  row.policy = policy;
  row.seed = seed;
  row.access_prob = report.access_probability;
  row.holding_prob = report.holding_probability;
  row.mean_throughput = report.mean_user_throughput_Bps;
  row.median_sinr_db = report.median_sinr_db;
  row.mean_abs_hm_deviation = report.mean_abs_hm_deviation_db;
  return row;
}

namespace {

std::string opt_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::optional<double> parse_opt(const std::string& field, const std::string& where) {
  if (field.empty()) return std::nullopt;
  try {
    size_t pos = 0;
    const double v = std::stod(field, &pos);
    if (pos != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(where + ": bad number '" + field + "'");
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (const char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  fields.push_back(current);
  return fields;
}

}  // namespace

void write_summary_csv(const std::vector<RunSummary>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "lambda,policy,seed,access_prob,holding_prob,mean_throughput,median_sinr_db,"
         "mean_abs_hm_deviation\n";
  for (const auto& r : rows) {
    out << format_double(r.lambda) << ',' << r.policy << ',' << r.seed << ','
        << opt_field(r.access_prob) << ',' << opt_field(r.holding_prob) << ','
        << opt_field(r.mean_throughput) << ',' << opt_field(r.median_sinr_db) << ','
        << format_double(r.mean_abs_hm_deviation) << "\n";
  }
}

std::vector<RunSummary> read_summary_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  std::vector<RunSummary> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    const std::string where = path + ":" + std::to_string(line_no);
    if (fields.size() != 8) throw std::runtime_error(where + ": expected 8 columns");
    RunSummary r;
    r.lambda = *parse_opt(fields[0], where);
    r.policy = fields[1];
    r.seed = std::stoull(fields[2]);
    r.access_prob = parse_opt(fields[3], where);
    r.holding_prob = parse_opt(fields[4], where);
    r.mean_throughput = parse_opt(fields[5], where);
    r.median_sinr_db = parse_opt(fields[6], where);
    r.mean_abs_hm_deviation = *parse_opt(fields[7], where);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_sinr_cdf_csv(const std::vector<std::pair<double, double>>& cdf,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "quantile,db\n";
  for (const auto& [q, db] : cdf) out << format_double(q) << ',' << format_double(db) << "\n";
}

std::vector<std::pair<double, double>> read_sinr_cdf_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  std::vector<std::pair<double, double>> cdf;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) throw std::runtime_error(path + ": expected 2 columns");
    cdf.emplace_back(*parse_opt(fields[0], path), *parse_opt(fields[1], path));
  }
  return cdf;
}

void write_cell_loads_csv(const std::vector<double>& mean_loads, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "cell_id,mean_load\n";
  for (size_t i = 0; i < mean_loads.size(); ++i) {
    out << i << ',' << format_double(mean_loads[i]) << "\n";
  }
}

}  // namespace hosim
