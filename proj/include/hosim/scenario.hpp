#ifndef HOSIM_SCENARIO_HPP
#define HOSIM_SCENARIO_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hosim/geometry.hpp"
#include "hosim/link_curve.hpp"
#include "hosim/propagation.hpp"

namespace hosim {

// Scenario file is malformed (bad syntax, unknown key, bad number).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A type invariant is violated; the message names the offending field.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SiteSpec {
  int id = 0;
  Point position;
  int band_index = 0;
  int prb_capacity = 25;
  double tx_power_per_subcarrier_dbm = 18.2;
  double antenna_gain_dbi = 14.0;

  bool operator==(const SiteSpec&) const = default;
};

struct RadioParams {
  int reuse_factor = 3;
  int subcarriers_per_prb = 12;
  double subcarrier_bandwidth_hz = 15e3;
  double thermal_noise_per_subcarrier_dbm = -132.24;
  int min_prb_per_user = 1;
  int max_prb_per_user = 4;
  double cac_signal_threshold_dbm = -110.0;
  double ho_signal_threshold_dbm = -110.0;

  bool operator==(const RadioParams&) const = default;
};

// Co-channel indicator between cell pairs: entry(i,j) = 1 iff i != j and the
// two cells share a band. Symmetric; the diagonal is excluded from all sums.
class InterferenceMatrix {
 public:
  InterferenceMatrix() = default;
  explicit InterferenceMatrix(int n) : n_(n), entries_(static_cast<size_t>(n) * n, 0) {}

  int size() const { return n_; }
  uint8_t at(int i, int j) const { return entries_[static_cast<size_t>(i) * n_ + j]; }
  void set(int i, int j, uint8_t v) { entries_[static_cast<size_t>(i) * n_ + j] = v; }

  bool operator==(const InterferenceMatrix&) const = default;

 private:
  int n_ = 0;
  std::vector<uint8_t> entries_;
};

struct TrafficSpec {
  double arrival_rate = 0.0;             // mobiles/s, network-wide
  std::vector<double> hotspot_weights;   // per site; resolved to n_sites at validation
  double file_size_bytes = 5e6;
  double user_speed_mps = 3.0;
  double placement_radius_m = -1.0;      // <= 0: derived from the layout

  bool operator==(const TrafficSpec&) const = default;
};

// Handover-margin policy and engine cadence knobs.
struct PolicySpec {
  double f0_db = 6.0;
  double hm_min_db = 0.0;
  double hm_max_db = 12.0;
  int order = 1;                     // 0 = fixed planned margin, 1 = load-adaptive
  double hysteresis_db = 0.0;
  double adjacency_radius_m = -1.0;  // <= 0: derived from the layout
  double load_smoothing_tau_s = 60.0;
  double warmup_fraction = 0.1;
  int ho_eval_every = 1;             // snapshots between handover evaluations
  int margin_update_every = 1;       // snapshots between margin updates

  bool operator==(const PolicySpec&) const = default;
};

struct Scenario {
  std::vector<SiteSpec> sites;
  RadioParams radio;
  PropagationParams propagation;
  TrafficSpec traffic;
  PolicySpec policy;
  LinkCurve link_curve;
  double snapshot_duration_s = 1.0;
  double sim_duration_s = 600.0;
  uint64_t rng_seed = 1;

  // Derived at validation, deterministic in the fields above.
  InterferenceMatrix interference;
  std::vector<std::vector<int>> neighbors;  // per cell, sorted ids within adjacency radius
  Rect bounds;                              // placement / random-walk box
  double median_neighbor_distance_m = 0.0;

  int n_sites() const { return static_cast<int>(sites.size()); }

  // Checks every invariant (throws ValidationError naming the field) and
  // fills the derived members. Resolves auto (<= 0) radii and missing
  // hotspot weights to concrete values so that a validated scenario
  // round-trips through save/load field-for-field.
  void validate_and_resolve();

  bool operator==(const Scenario&) const = default;
};

struct LayoutDefaults {
  double inter_site_distance_m = 1000.0;
  int prb_capacity = 25;
  double tx_power_per_subcarrier_dbm = 18.2;
  double antenna_gain_dbi = 14.0;
};

// Sites on a hexagonal lattice, each perturbed by an independent uniform
// jitter in [-jitter_m, jitter_m]^2; band indices 3-color the unperturbed
// lattice. Deterministic for a fixed seed. The lattice is filled row-major
// with a row width equal to the smallest multiple of 3 >= ceil(sqrt(n)), so
// every full row carries the three bands equally.
std::vector<SiteSpec> generate_layout(int n_sites, double jitter_m, uint64_t seed,
                                      const LayoutDefaults& defaults = {});

InterferenceMatrix build_interference_matrix(const std::vector<SiteSpec>& sites);

// Documented text format: "[section]" headers, "key = value" scalars, and
// whitespace-separated table rows under [sites], [hotspots] and
// [link_curve_table]. See README for the grammar.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text, const std::string& origin = "<string>");

std::string scenario_to_text(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::string& path);

// CSV columns: id,x,y,band_index,prb_capacity.
void export_layout_csv(const std::vector<SiteSpec>& sites, const std::string& path);

}  // namespace hosim

#endif
