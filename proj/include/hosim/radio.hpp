#ifndef HOSIM_RADIO_HPP
#define HOSIM_RADIO_HPP

#include <span>
#include <vector>

#include "hosim/scenario.hpp"

namespace hosim {

// Smoothed per-cell load, every entry in [0,1]. The window is the EMA time
// constant used to derive the smoothing factor.
struct LoadVector {
  std::vector<double> chi;
  double window_s = 60.0;

  bool operator==(const LoadVector&) const = default;
};

// Per-subcarrier received power from every site at one user position, in dBm.
// Shadow values are the user's persistent per-site draws.
std::vector<double> received_powers_dbm(const std::vector<SiteSpec>& sites, const Point& position,
                                        std::span<const double> shadow_db,
                                        const PropagationParams& params);

// Load-weighted co-channel interference in watts:
//   I = sum_{k != serving} lambda(serving,k) * chi_k * rx_linear_k
double interference_per_subcarrier_w(int serving, std::span<const double> rx_dbm,
                                     const InterferenceMatrix& lambda,
                                     std::span<const double> loads);

// S / (I + N_th), all linear, with S the serving-cell per-subcarrier power.
double sinr_linear(int serving, std::span<const double> rx_dbm, const InterferenceMatrix& lambda,
                   std::span<const double> loads, double thermal_noise_w);

double user_throughput_bps(int allocated_prbs, double per_prb_bps);

// One user's claim during reallocation, ordered by network arrival.
struct PrbClaim {
  int64_t user_id = 0;
  double admitted_at = 0.0;
};

// Gives every user min_prb, then deals the remaining PRBs one at a time in
// arrival order up to max_prb. The result is maximal: no PRB stays idle
// while some user is below max_prb. Throws ValidationError when the minimum
// demands already exceed capacity (an admission-control breach).
// Claims must be pre-sorted by (admitted_at, user_id).
std::vector<int> reallocate_prbs(std::span<const PrbClaim> claims, int capacity, int min_prb,
                                 int max_prb);

// EMA update; alpha in (0,1], occupancy in [0,1].
double update_load(double smoothed, double occupancy, double alpha);
void update_loads(LoadVector& loads, std::span<const double> occupancy, double alpha);

}  // namespace hosim

#endif
