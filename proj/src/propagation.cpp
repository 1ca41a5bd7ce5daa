#include "hosim/propagation.hpp"

#include <algorithm>
#include <cmath>

#include "hosim/rng.hpp"
#include "hosim/scenario.hpp"

namespace hosim {

double path_loss_db(const SiteSpec& site, const Point& point, double shadow_db,
                    const PropagationParams& params) {
  const double d = std::max(distance(site.position, point), params.reference_distance_m);
  const double loss = params.l0_db +
                      10.0 * params.path_loss_exponent *
                          std::log10(d / params.reference_distance_m) +
                      shadow_db;
  return std::max(loss, params.min_coupling_loss_db);
}

double received_power_dbm(const SiteSpec& site, const Point& point, double shadow_db,
                          const PropagationParams& params) {
  return site.tx_power_per_subcarrier_dbm + site.antenna_gain_dbi -
         path_loss_db(site, point, shadow_db, params);
}

std::vector<double> ShadowingField::draw_for_user(int64_t user_id) const {
  Rng rng(derive_seed(master_seed_, "shadow", static_cast<uint64_t>(user_id)));
  std::vector<double> values(static_cast<size_t>(n_sites_));
  for (auto& v : values) v = rng.normal(0.0, sigma_db_);
  return values;
}

}  // namespace hosim
