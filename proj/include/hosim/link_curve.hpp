#ifndef HOSIM_LINK_CURVE_HPP
#define HOSIM_LINK_CURVE_HPP

#include <string>
#include <utility>
#include <vector>

namespace hosim {

// Maps per-subcarrier SINR to throughput per PRB. The default is an
// attenuated Shannon curve
//   thr(sinr) = min(cap, bandwidth_efficiency * prb_bandwidth
//                        * log2(1 + sinr / sinr_efficiency))
// An optional piecewise-linear table (sinr_db -> bps, monotone, first row at
// 0 bps) replaces the analytic form when present; the cap still applies.
struct LinkCurve {
  double bandwidth_efficiency = 0.6;
  double sinr_efficiency = 1.25;
  double max_throughput_per_prb_bps = 720e3;
  double prb_bandwidth_hz = 180e3;
  std::vector<std::pair<double, double>> table;  // (sinr_db, bps), sorted

  bool operator==(const LinkCurve&) const = default;
};

// Throughput per PRB in bits/s for a linear-domain SINR. Monotone
// non-decreasing, 0 at sinr 0, capped at max_throughput_per_prb_bps.
double throughput_per_prb(double sinr, const LinkCurve& curve);

// Loads a table from CSV rows "sinr_db,throughput_per_prb_bps". Throws
// std::runtime_error on unreadable files or non-monotone tables, and when
// the first row is not 0 bps.
std::vector<std::pair<double, double>> load_link_curve_csv(const std::string& path);

}  // namespace hosim

#endif
