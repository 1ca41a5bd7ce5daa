#include "hosim/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hosim {

namespace {
constexpr double kSymmetryTolDb = 1e-9;
constexpr double kDomainEps = 1e-9;
}  // namespace

BalancingFunction::BalancingFunction(double f0_db, double hm_min_db, double hm_max_db, int order)
    : f0_db_(f0_db), hm_min_db_(hm_min_db), hm_max_db_(hm_max_db), order_(order) {
  if (!(hm_min_db <= f0_db && f0_db <= hm_max_db)) {
    throw ValidationError("balancing.f0_db: must satisfy hm_min <= f0 <= hm_max");
  }
  if (order != 0 && order != 1) {
    throw ValidationError("balancing.order: must be 0 or 1");
  }
  if (order == 1) {
    // f(x) = f0 + (f0 - hm_max) x maps [-1,1] onto [hm_min, hm_max] exactly
    // only when f0 is the midpoint; otherwise evaluation clamps
    midpoint_warning_ = std::abs(f0_db - 0.5 * (hm_min_db + hm_max_db)) > 1e-12;
  }
}

double BalancingFunction::evaluate(double x) const {
  if (std::abs(x) > 1.0 + kDomainEps) {
    throw std::domain_error("balancing function: load difference " + std::to_string(x) +
                            " outside [-1,1]");
  }
  x = std::clamp(x, -1.0, 1.0);
  if (order_ == 0) return f0_db_;
  const double value = f0_db_ + (f0_db_ - hm_max_db_) * x;
  return std::clamp(value, hm_min_db_, hm_max_db_);
}

BalancingReport validate_balancing(const std::function<double(double)>& f, double f0_db,
                                   double hm_min_db, double hm_max_db, int n_samples) {
  if (n_samples < 2) throw ValidationError("validate_balancing: n_samples must be >= 2");
  BalancingReport report;
  report.n_samples = n_samples;
  report.min_value_db = f(-1.0);
  report.max_value_db = f(-1.0);
  double previous = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double x = -1.0 + 2.0 * i / (n_samples - 1);
    const double value = f(x);
    report.min_value_db = std::min(report.min_value_db, value);
    report.max_value_db = std::max(report.max_value_db, value);
    if (i > 0 && value > previous + 1e-12) ++report.monotonicity_violations;
    if (value < hm_min_db - 1e-12 || value > hm_max_db + 1e-12) ++report.range_violations;
    const double symmetry_error = std::abs(value + f(-x) - 2.0 * f0_db);
    report.max_symmetry_error_db = std::max(report.max_symmetry_error_db, symmetry_error);
    if (symmetry_error > kSymmetryTolDb) ++report.symmetry_violations;
    previous = value;
  }
  report.endpoint_coverage = std::abs(report.min_value_db - hm_min_db) <= 1e-9 &&
                             std::abs(report.max_value_db - hm_max_db) <= 1e-9;
  return report;
}

BalancingReport validate_balancing(const BalancingFunction& bf, int n_samples) {
  auto report = validate_balancing([&](double x) { return bf.evaluate(x); }, bf.f0_db(),
                                   bf.hm_min_db(), bf.hm_max_db(), n_samples);
  report.midpoint_warning = bf.midpoint_warning();
  return report;
}

std::string format_report(const BalancingReport& r) {
  std::ostringstream out;
  out << "samples: " << r.n_samples << "\n"
      << "monotonicity violations: " << r.monotonicity_violations << "\n"
      << "range violations: " << r.range_violations << "\n"
      << "symmetry violations: " << r.symmetry_violations
      << " (max |f(x)+f(-x)-2f0| = " << r.max_symmetry_error_db << " dB)\n"
      << "attained range: [" << r.min_value_db << ", " << r.max_value_db << "] dB\n"
      << "endpoint coverage: " << (r.endpoint_coverage ? "yes" : "no") << "\n";
  if (r.midpoint_warning) {
    out << "warning: f0 is not the midpoint of [hm_min, hm_max]; "
           "order-1 evaluation clamps and cannot reach both bounds\n";
  }
  out << (r.passed() ? "result: PASS\n" : "result: FAIL\n");
  return out.str();
}

HandoverMarginMatrix::HandoverMarginMatrix(int n_cells, double initial_db, double hysteresis_db)
    : n_(n_cells),
      hysteresis_db_(hysteresis_db),
      margins_(static_cast<size_t>(n_cells) * n_cells, initial_db) {}

void update_margins(HandoverMarginMatrix& hm, std::span<const double> loads,
                    const BalancingFunction& bf, const std::vector<std::vector<int>>& neighbors) {
  for (size_t e = 0; e < neighbors.size(); ++e) {
    for (const int k : neighbors[e]) {
      hm.set(static_cast<int>(e), k, bf.evaluate(loads[e] - loads[k]));
    }
  }
}

CacDecision admit(std::span<const double> rx_dbm, std::span<const int> free_prbs,
                  const RadioParams& radio) {
  // strongest server, ties to the lowest cell id
  int best = 0;
  for (size_t k = 1; k < rx_dbm.size(); ++k) {
    if (rx_dbm[k] > rx_dbm[best]) best = static_cast<int>(k);
  }
  CacDecision decision;
  decision.serving_cell = best;
  if (rx_dbm[best] < radio.cac_signal_threshold_dbm) {
    decision.outcome = CacOutcome::kBlockedCoverage;
    decision.serving_cell = -1;
    return decision;
  }
  if (free_prbs[best] < radio.min_prb_per_user) {
    decision.outcome = CacOutcome::kBlockedResource;
    return decision;
  }
  decision.outcome = CacOutcome::kAdmitted;
  decision.granted_prbs = std::min(radio.max_prb_per_user, free_prbs[best]);
  return decision;
}

std::optional<int> evaluate_handover(int serving, std::span<const double> rx_dbm,
                                     std::span<const int> free_prbs,
                                     const HandoverMarginMatrix& hm,
                                     const std::vector<std::vector<int>>& neighbors,
                                     const RadioParams& radio) {
  std::optional<int> target;
  double best_pbq = 0.0;
  for (const int k : neighbors[static_cast<size_t>(serving)]) {
    const double pbq = rx_dbm[k] - rx_dbm[serving];
    if (pbq < hm.at(serving, k) + hm.hysteresis_db()) continue;
    if (rx_dbm[k] < radio.ho_signal_threshold_dbm) continue;
    if (free_prbs[k] < radio.min_prb_per_user) continue;
    if (!target || pbq > best_pbq || (pbq == best_pbq && k < *target)) {
      target = k;
      best_pbq = pbq;
    }
  }
  return target;
}

}  // namespace hosim
