#ifndef HOSIM_PROPAGATION_HPP
#define HOSIM_PROPAGATION_HPP

#include <cstdint>
#include <vector>

#include "hosim/geometry.hpp"

namespace hosim {

struct SiteSpec;

// Log-distance path loss with log-normal shadowing,
//   L_db(d) = l0_db + 10 * gamma * log10(d / d0) + shadow_db
// clamped below by min_coupling_loss_db. Defaults are the usual 2 GHz urban
// macro numbers (128.1 dB at 1 km, exponent 3.76, sigma 8 dB).
struct PropagationParams {
  double l0_db = 128.1;
  double path_loss_exponent = 3.76;
  double shadowing_sigma_db = 8.0;
  double reference_distance_m = 1000.0;
  double min_coupling_loss_db = 70.0;

  bool operator==(const PropagationParams&) const = default;
};

// Distance below reference_distance_m is clamped to it; shadowing is applied
// before the coupling-loss clamp.
double path_loss_db(const SiteSpec& site, const Point& point, double shadow_db,
                    const PropagationParams& params);

// Per-subcarrier received power: tx_power + antenna_gain - path_loss.
double received_power_dbm(const SiteSpec& site, const Point& point, double shadow_db,
                          const PropagationParams& params);

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// Per-(user, site) shadowing in dB, drawn once per user from a stream derived
// off the master seed and the user id, and fixed for the user's lifetime.
class ShadowingField {
 public:
  ShadowingField(uint64_t master_seed, double sigma_db, int n_sites)
      : master_seed_(master_seed), sigma_db_(sigma_db), n_sites_(n_sites) {}

  // Deterministic in user_id regardless of draw order.
  std::vector<double> draw_for_user(int64_t user_id) const;

  double sigma_db() const { return sigma_db_; }
  int n_sites() const { return n_sites_; }

 private:
  uint64_t master_seed_;
  double sigma_db_;
  int n_sites_;
};

}  // namespace hosim

#endif
