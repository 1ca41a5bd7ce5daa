#ifndef HOSIM_MOBILITY_HPP
#define HOSIM_MOBILITY_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hosim/radio.hpp"
#include "hosim/scenario.hpp"

namespace hosim {

// The load-balancing margin function f: load difference in [-1,1] -> dB.
// Order 0 is the constant planned margin f0; order 1 is
//   f(x) = f0 + (f0 - hm_max) * x
// clamped to [hm_min, hm_max]. Exact endpoint coverage at order 1 needs
// f0 = (hm_min + hm_max) / 2; other triples are accepted but flagged.
class BalancingFunction {
 public:
  BalancingFunction(double f0_db, double hm_min_db, double hm_max_db, int order);

  double f0_db() const { return f0_db_; }
  double hm_min_db() const { return hm_min_db_; }
  double hm_max_db() const { return hm_max_db_; }
  int order() const { return order_; }
  bool midpoint_warning() const { return midpoint_warning_; }

  // Throws std::domain_error when |x| > 1 + 1e-9; smaller excursions are
  // clamped to the interval.
  double evaluate(double x) const;

 private:
  double f0_db_;
  double hm_min_db_;
  double hm_max_db_;
  int order_;
  bool midpoint_warning_ = false;
};

struct BalancingReport {
  int n_samples = 0;
  int monotonicity_violations = 0;
  int range_violations = 0;
  int symmetry_violations = 0;
  double max_symmetry_error_db = 0.0;
  double min_value_db = 0.0;
  double max_value_db = 0.0;
  bool endpoint_coverage = false;  // attains both hm_min and hm_max
  bool midpoint_warning = false;

  bool passed() const {
    return monotonicity_violations == 0 && range_violations == 0 && symmetry_violations == 0;
  }
};

// Checks, on a uniform n-point grid over [-1,1]: monotone non-increasing,
// range within [hm_min, hm_max], and |f(x)+f(-x)-2 f(0)| <= 1e-9. The
// generic overload exists so broken curves can be probed independently of
// BalancingFunction.
BalancingReport validate_balancing(const std::function<double(double)>& f, double f0_db,
                                   double hm_min_db, double hm_max_db, int n_samples);
BalancingReport validate_balancing(const BalancingFunction& bf, int n_samples);

std::string format_report(const BalancingReport& report);

// Margins for adjacent ordered cell pairs; absent pairs are not handover
// candidates. Entries produced by one BalancingFunction satisfy
// HM(e,k) + HM(k,e) = 2 f0.
class HandoverMarginMatrix {
 public:
  HandoverMarginMatrix() = default;
  HandoverMarginMatrix(int n_cells, double initial_db, double hysteresis_db);

  double at(int e, int k) const { return margins_[static_cast<size_t>(e) * n_ + k]; }
  void set(int e, int k, double db) { margins_[static_cast<size_t>(e) * n_ + k] = db; }
  double hysteresis_db() const { return hysteresis_db_; }
  int size() const { return n_; }

 private:
  int n_ = 0;
  double hysteresis_db_ = 0.0;
  std::vector<double> margins_;
};

// HM(e,k) = f(chi_e - chi_k) for every adjacent ordered pair.
void update_margins(HandoverMarginMatrix& hm, std::span<const double> loads,
                    const BalancingFunction& bf, const std::vector<std::vector<int>>& neighbors);

enum class CacOutcome { kAdmitted, kBlockedCoverage, kBlockedResource };

struct CacDecision {
  CacOutcome outcome = CacOutcome::kBlockedCoverage;
  int serving_cell = -1;
  int granted_prbs = 0;
};

// Serving candidate is the argmax of received power over all sites (ties to
// the lowest cell id); blocked on coverage below cac_signal_threshold, then
// on free PRBs below min_prb_per_user; otherwise admitted with
// min(max_prb_per_user, free).
CacDecision admit(std::span<const double> rx_dbm, std::span<const int> free_prbs,
                  const RadioParams& radio);

// Power-budget handover: among adjacent cells k with
//   rx[k] - rx[serving] >= HM(serving,k) + hysteresis,
//   rx[k] >= ho_signal_threshold, and free PRBs >= min_prb_per_user,
// picks the k maximizing the power budget (ties to the lowest id).
// nullopt means stay.
std::optional<int> evaluate_handover(int serving, std::span<const double> rx_dbm,
                                     std::span<const int> free_prbs,
                                     const HandoverMarginMatrix& hm,
                                     const std::vector<std::vector<int>>& neighbors,
                                     const RadioParams& radio);

}  // namespace hosim

#endif
