#include "hosim/radio.hpp"

#include <algorithm>
#include <cmath>

namespace hosim {

std::vector<double> received_powers_dbm(const std::vector<SiteSpec>& sites, const Point& position,
                                        std::span<const double> shadow_db,
                                        const PropagationParams& params) {
  std::vector<double> rx(sites.size());
  for (size_t k = 0; k < sites.size(); ++k) {
    rx[k] = received_power_dbm(sites[k], position, shadow_db[k], params);
  }
  return rx;
}

double interference_per_subcarrier_w(int serving, std::span<const double> rx_dbm,
                                     const InterferenceMatrix& lambda,
                                     std::span<const double> loads) {
  double total_w = 0.0;
  for (size_t k = 0; k < rx_dbm.size(); ++k) {
    if (static_cast<int>(k) == serving || !lambda.at(serving, static_cast<int>(k))) continue;
    total_w += loads[k] * dbm_to_watts(rx_dbm[k]);
  }
  return total_w;
}

double sinr_linear(int serving, std::span<const double> rx_dbm, const InterferenceMatrix& lambda,
                   std::span<const double> loads, double thermal_noise_w) {
  const double signal_w = dbm_to_watts(rx_dbm[serving]);
  const double interference_w = interference_per_subcarrier_w(serving, rx_dbm, lambda, loads);
  return signal_w / (interference_w + thermal_noise_w);
}

double user_throughput_bps(int allocated_prbs, double per_prb_bps) {
  return allocated_prbs * per_prb_bps;
}

std::vector<int> reallocate_prbs(std::span<const PrbClaim> claims, int capacity, int min_prb,
                                 int max_prb) {
  const int n = static_cast<int>(claims.size());
  if (n == 0) return {};
  if (static_cast<int64_t>(n) * min_prb > capacity) {
    throw ValidationError("reallocate_prbs: minimum demands exceed capacity (" +
                          std::to_string(n) + " users x " + std::to_string(min_prb) + " > " +
                          std::to_string(capacity) + ")");
  }
  std::vector<int> alloc(static_cast<size_t>(n), min_prb);
  int remaining = capacity - n * min_prb;
  // deal one PRB at a time in arrival order until everyone is at max or the
  // cell is exhausted
  bool granted = true;
  while (remaining > 0 && granted) {
    granted = false;
    for (int i = 0; i < n && remaining > 0; ++i) {
      if (alloc[static_cast<size_t>(i)] < max_prb) {
        ++alloc[static_cast<size_t>(i)];
        --remaining;
        granted = true;
      }
    }
  }
  return alloc;
}

double update_load(double smoothed, double occupancy, double alpha) {
  return (1.0 - alpha) * smoothed + alpha * occupancy;
}

void update_loads(LoadVector& loads, std::span<const double> occupancy, double alpha) {
  for (size_t i = 0; i < loads.chi.size(); ++i) {
    loads.chi[i] = update_load(loads.chi[i], occupancy[i], alpha);
  }
}

}  // namespace hosim
