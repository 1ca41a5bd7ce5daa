#include "hosim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "hosim/metrics.hpp"
#include "hosim/rng.hpp"

namespace hosim {

namespace {

constexpr double kHexRowFactor = 0.86602540378443864676;  // sqrt(3)/2

struct ParsedFile {
  // section -> key -> value for scalar sections
  std::map<std::string, std::map<std::string, std::string>> scalars;
  // section -> rows of whitespace-separated tokens for table sections
  std::map<std::string, std::vector<std::vector<std::string>>> tables;
};

const std::set<std::string> kScalarSections = {"general",     "radio",  "propagation",
                                               "traffic",     "policy", "link_curve",
                                               "layout"};
const std::set<std::string> kTableSections = {"sites", "hotspots", "link_curve_table"};

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

ParsedFile parse_sections(const std::string& text, const std::string& origin) {
  ParsedFile out;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trimmed(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(where + ": unterminated section header");
      section = trimmed(line.substr(1, line.size() - 2));
      if (!kScalarSections.count(section) && !kTableSections.count(section)) {
        throw ParseError(where + ": unknown section [" + section + "]");
      }
      continue;
    }
    if (section.empty()) throw ParseError(where + ": content before any [section]");
    if (kScalarSections.count(section)) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError(where + ": expected key = value");
      const std::string key = trimmed(line.substr(0, eq));
      const std::string value = trimmed(line.substr(eq + 1));
      if (key.empty() || value.empty()) throw ParseError(where + ": expected key = value");
      if (!out.scalars[section].emplace(key, value).second) {
        throw ParseError(where + ": duplicate key " + key);
      }
    } else {
      std::istringstream row(line);
      std::vector<std::string> tokens;
      std::string tok;
      while (row >> tok) tokens.push_back(tok);
      out.tables[section].push_back(std::move(tokens));
    }
  }
  return out;
}

double parse_double(const std::string& value, const std::string& what) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParseError(what + ": not a number: '" + value + "'");
  }
}

int64_t parse_int(const std::string& value, const std::string& what) {
  try {
    size_t pos = 0;
    const int64_t v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParseError(what + ": not an integer: '" + value + "'");
  }
}

uint64_t parse_uint(const std::string& value, const std::string& what) {
  try {
    size_t pos = 0;
    const uint64_t v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParseError(what + ": not an unsigned integer: '" + value + "'");
  }
}

// Applies every known key of a scalar section; rejects unknown keys.
template <typename Fn>
void for_each_key(const ParsedFile& file, const std::string& section, Fn&& apply) {
  const auto it = file.scalars.find(section);
  if (it == file.scalars.end()) return;
  for (const auto& [key, value] : it->second) {
    if (!apply(key, value)) {
      throw ParseError("[" + section + "] unknown key: " + key);
    }
  }
}

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ValidationError(field + ": " + message);
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<SiteSpec> generate_layout(int n_sites, double jitter_m, uint64_t seed,
                                      const LayoutDefaults& defaults) {
  require(n_sites >= 1, "layout.n_sites", "must be >= 1");
  int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_sites))));
  cols += (3 - cols % 3) % 3;  // full rows carry the three bands equally
  const double isd = defaults.inter_site_distance_m;

  Rng rng(seed);
  std::vector<SiteSpec> sites;
  sites.reserve(static_cast<size_t>(n_sites));
  for (int i = 0; i < n_sites; ++i) {
    const int r = i / cols;
    const int q = i % cols;
    SiteSpec site;
    site.id = i;
    site.position.x = isd * (q + 0.5 * r);
    site.position.y = isd * kHexRowFactor * r;
    // proper 3-coloring of the unperturbed lattice: all six axial neighbor
    // deltas change (q - r) mod 3
    site.band_index = ((q - r) % 3 + 3) % 3;
    site.position.x += rng.uniform(-jitter_m, jitter_m);
    site.position.y += rng.uniform(-jitter_m, jitter_m);
    site.prb_capacity = defaults.prb_capacity;
    site.tx_power_per_subcarrier_dbm = defaults.tx_power_per_subcarrier_dbm;
    site.antenna_gain_dbi = defaults.antenna_gain_dbi;
    sites.push_back(site);
  }
  return sites;
}

InterferenceMatrix build_interference_matrix(const std::vector<SiteSpec>& sites) {
  const int n = static_cast<int>(sites.size());
  InterferenceMatrix lambda(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      lambda.set(i, j, i != j && sites[i].band_index == sites[j].band_index ? 1 : 0);
    }
  }
  return lambda;
}

void Scenario::validate_and_resolve() {
  require(!sites.empty(), "sites", "must be non-empty");
  for (size_t i = 0; i < sites.size(); ++i) {
    const auto& s = sites[i];
    const std::string field = "sites[" + std::to_string(i) + "]";
    require(s.id == static_cast<int>(i), field + ".id",
            "ids must be consecutive starting at 0");
    require(std::isfinite(s.position.x) && std::isfinite(s.position.y), field + ".position",
            "must be finite");
    require(s.prb_capacity >= 1, field + ".prb_capacity", "must be >= 1");
    require(s.band_index >= 0 && s.band_index < radio.reuse_factor, field + ".band_index",
            "must be in [0, reuse_factor)");
  }

  require(radio.reuse_factor >= 1, "radio.reuse_factor", "must be >= 1");
  require(radio.subcarriers_per_prb >= 1, "radio.subcarriers_per_prb", "must be >= 1");
  require(radio.subcarrier_bandwidth_hz > 0, "radio.subcarrier_bandwidth_hz", "must be > 0");
  require(std::isfinite(radio.thermal_noise_per_subcarrier_dbm),
          "radio.thermal_noise_per_subcarrier_dbm", "must be finite");
  require(radio.min_prb_per_user >= 1, "radio.min_prb_per_user", "must be >= 1");
  require(radio.max_prb_per_user >= radio.min_prb_per_user, "radio.max_prb_per_user",
          "must be >= min_prb_per_user");
  const int min_capacity =
      std::min_element(sites.begin(), sites.end(), [](const auto& a, const auto& b) {
        return a.prb_capacity < b.prb_capacity;
      })->prb_capacity;
  require(radio.max_prb_per_user <= min_capacity, "radio.max_prb_per_user",
          "must be <= prb_capacity of every site");

  require(propagation.path_loss_exponent > 2.0, "propagation.path_loss_exponent",
          "must be > 2");
  require(propagation.shadowing_sigma_db >= 0.0, "propagation.shadowing_sigma_db",
          "must be >= 0");
  require(propagation.reference_distance_m > 0.0, "propagation.reference_distance_m",
          "must be > 0");

  require(traffic.arrival_rate >= 0.0, "traffic.arrival_rate", "must be >= 0");
  require(traffic.file_size_bytes > 0.0, "traffic.file_size_bytes", "must be > 0");
  require(traffic.user_speed_mps >= 0.0, "traffic.user_speed_mps", "must be >= 0");
  if (traffic.hotspot_weights.empty()) {
    traffic.hotspot_weights.assign(sites.size(), 1.0);
  }
  require(traffic.hotspot_weights.size() == sites.size(), "traffic.hotspot_weights",
          "must have one entry per site");
  bool any_positive = false;
  for (size_t i = 0; i < traffic.hotspot_weights.size(); ++i) {
    require(traffic.hotspot_weights[i] >= 0.0,
            "traffic.hotspot_weights[" + std::to_string(i) + "]", "must be >= 0");
    any_positive = any_positive || traffic.hotspot_weights[i] > 0.0;
  }
  require(any_positive, "traffic.hotspot_weights", "at least one must be positive");

  require(policy.hm_min_db <= policy.f0_db && policy.f0_db <= policy.hm_max_db, "policy.f0_db",
          "must satisfy hm_min <= f0 <= hm_max");
  require(policy.order == 0 || policy.order == 1, "policy.order", "must be 0 or 1");
  require(policy.hysteresis_db >= 0.0, "policy.hysteresis_db", "must be >= 0");
  require(policy.load_smoothing_tau_s > 0.0, "policy.load_smoothing_tau_s", "must be > 0");
  require(policy.warmup_fraction >= 0.0 && policy.warmup_fraction < 1.0,
          "policy.warmup_fraction", "must be in [0,1)");
  require(policy.ho_eval_every >= 1, "policy.ho_eval_every", "must be >= 1");
  require(policy.margin_update_every >= 1, "policy.margin_update_every", "must be >= 1");

  require(link_curve.bandwidth_efficiency > 0.0, "link_curve.bandwidth_efficiency",
          "must be > 0");
  require(link_curve.sinr_efficiency > 0.0, "link_curve.sinr_efficiency", "must be > 0");
  require(link_curve.max_throughput_per_prb_bps > 0.0, "link_curve.max_throughput_per_prb_bps",
          "must be > 0");
  require(link_curve.prb_bandwidth_hz > 0.0, "link_curve.prb_bandwidth_hz", "must be > 0");
  if (!link_curve.table.empty()) {
    require(link_curve.table.front().second == 0.0, "link_curve_table",
            "first row must map to 0 bps");
    for (size_t i = 1; i < link_curve.table.size(); ++i) {
      require(link_curve.table[i].first > link_curve.table[i - 1].first &&
                  link_curve.table[i].second >= link_curve.table[i - 1].second,
              "link_curve_table", "must be monotone");
    }
  }

  require(snapshot_duration_s > 0.0, "snapshot_duration", "must be > 0");
  require(sim_duration_s >= snapshot_duration_s, "sim_duration",
          "must be >= snapshot_duration");

  // ---- derived state ----
  interference = build_interference_matrix(sites);

  // nearest-neighbor distances drive the derived radii
  std::vector<double> nn;
  nn.reserve(sites.size());
  for (const auto& a : sites) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : sites) {
      if (a.id == b.id) continue;
      best = std::min(best, distance(a.position, b.position));
    }
    if (std::isfinite(best)) nn.push_back(best);
  }
  median_neighbor_distance_m = sites.size() > 1 ? median(nn) : 0.0;

  if (policy.adjacency_radius_m <= 0.0) {
    policy.adjacency_radius_m =
        sites.size() > 1 ? 2.0 * median_neighbor_distance_m : 1.0;
  }
  if (traffic.placement_radius_m <= 0.0) {
    traffic.placement_radius_m =
        sites.size() > 1 ? 0.75 * median_neighbor_distance_m : 500.0;
  }

  neighbors.assign(sites.size(), {});
  for (const auto& a : sites) {
    for (const auto& b : sites) {
      if (a.id != b.id && distance(a.position, b.position) <= policy.adjacency_radius_m) {
        neighbors[a.id].push_back(b.id);
      }
    }
  }

  bounds = Rect{sites[0].position.x, sites[0].position.y, sites[0].position.x,
                sites[0].position.y};
  for (const auto& s : sites) {
    bounds.x_min = std::min(bounds.x_min, s.position.x);
    bounds.y_min = std::min(bounds.y_min, s.position.y);
    bounds.x_max = std::max(bounds.x_max, s.position.x);
    bounds.y_max = std::max(bounds.y_max, s.position.y);
  }
  // fixed walk-out band; placement discs are clamped into it
  const double margin = 500.0;
  bounds.x_min -= margin;
  bounds.y_min -= margin;
  bounds.x_max += margin;
  bounds.y_max += margin;
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  const ParsedFile file = parse_sections(text, origin);
  Scenario sc;

  for_each_key(file, "general", [&](const std::string& k, const std::string& v) {
    if (k == "snapshot_duration_s") sc.snapshot_duration_s = parse_double(v, "general." + k);
    else if (k == "sim_duration_s") sc.sim_duration_s = parse_double(v, "general." + k);
    else if (k == "rng_seed") sc.rng_seed = parse_uint(v, "general." + k);
    else return false;
    return true;
  });

  for_each_key(file, "radio", [&](const std::string& k, const std::string& v) {
    if (k == "reuse_factor") sc.radio.reuse_factor = static_cast<int>(parse_int(v, "radio." + k));
    else if (k == "subcarriers_per_prb")
      sc.radio.subcarriers_per_prb = static_cast<int>(parse_int(v, "radio." + k));
    else if (k == "subcarrier_bandwidth_hz")
      sc.radio.subcarrier_bandwidth_hz = parse_double(v, "radio." + k);
    else if (k == "thermal_noise_per_subcarrier_dbm")
      sc.radio.thermal_noise_per_subcarrier_dbm = parse_double(v, "radio." + k);
    else if (k == "min_prb_per_user")
      sc.radio.min_prb_per_user = static_cast<int>(parse_int(v, "radio." + k));
    else if (k == "max_prb_per_user")
      sc.radio.max_prb_per_user = static_cast<int>(parse_int(v, "radio." + k));
    else if (k == "cac_signal_threshold_dbm")
      sc.radio.cac_signal_threshold_dbm = parse_double(v, "radio." + k);
    else if (k == "ho_signal_threshold_dbm")
      sc.radio.ho_signal_threshold_dbm = parse_double(v, "radio." + k);
    else return false;
    return true;
  });

  for_each_key(file, "propagation", [&](const std::string& k, const std::string& v) {
    if (k == "l0_db") sc.propagation.l0_db = parse_double(v, "propagation." + k);
    else if (k == "path_loss_exponent")
      sc.propagation.path_loss_exponent = parse_double(v, "propagation." + k);
    else if (k == "shadowing_sigma_db")
      sc.propagation.shadowing_sigma_db = parse_double(v, "propagation." + k);
    else if (k == "reference_distance_m")
      sc.propagation.reference_distance_m = parse_double(v, "propagation." + k);
    else if (k == "min_coupling_loss_db")
      sc.propagation.min_coupling_loss_db = parse_double(v, "propagation." + k);
    else return false;
    return true;
  });

  for_each_key(file, "traffic", [&](const std::string& k, const std::string& v) {
    if (k == "arrival_rate") sc.traffic.arrival_rate = parse_double(v, "traffic." + k);
    else if (k == "file_size_bytes")
      sc.traffic.file_size_bytes = parse_double(v, "traffic." + k);
    else if (k == "user_speed_mps") sc.traffic.user_speed_mps = parse_double(v, "traffic." + k);
    else if (k == "placement_radius_m")
      sc.traffic.placement_radius_m = parse_double(v, "traffic." + k);
    else return false;
    return true;
  });

  for_each_key(file, "policy", [&](const std::string& k, const std::string& v) {
    if (k == "f0_db") sc.policy.f0_db = parse_double(v, "policy." + k);
    else if (k == "hm_min_db") sc.policy.hm_min_db = parse_double(v, "policy." + k);
    else if (k == "hm_max_db") sc.policy.hm_max_db = parse_double(v, "policy." + k);
    else if (k == "order") sc.policy.order = static_cast<int>(parse_int(v, "policy." + k));
    else if (k == "hysteresis_db") sc.policy.hysteresis_db = parse_double(v, "policy." + k);
    else if (k == "adjacency_radius_m")
      sc.policy.adjacency_radius_m = parse_double(v, "policy." + k);
    else if (k == "load_smoothing_tau_s")
      sc.policy.load_smoothing_tau_s = parse_double(v, "policy." + k);
    else if (k == "warmup_fraction")
      sc.policy.warmup_fraction = parse_double(v, "policy." + k);
    else if (k == "ho_eval_every")
      sc.policy.ho_eval_every = static_cast<int>(parse_int(v, "policy." + k));
    else if (k == "margin_update_every")
      sc.policy.margin_update_every = static_cast<int>(parse_int(v, "policy." + k));
    else return false;
    return true;
  });

  std::string curve_csv;
  for_each_key(file, "link_curve", [&](const std::string& k, const std::string& v) {
    if (k == "bandwidth_efficiency")
      sc.link_curve.bandwidth_efficiency = parse_double(v, "link_curve." + k);
    else if (k == "sinr_efficiency")
      sc.link_curve.sinr_efficiency = parse_double(v, "link_curve." + k);
    else if (k == "max_throughput_per_prb_bps")
      sc.link_curve.max_throughput_per_prb_bps = parse_double(v, "link_curve." + k);
    else if (k == "prb_bandwidth_hz")
      sc.link_curve.prb_bandwidth_hz = parse_double(v, "link_curve." + k);
    else if (k == "table_csv") curve_csv = v;
    else return false;
    return true;
  });
  if (!curve_csv.empty()) sc.link_curve.table = load_link_curve_csv(curve_csv);
  if (const auto it = file.tables.find("link_curve_table"); it != file.tables.end()) {
    sc.link_curve.table.clear();
    for (const auto& row : it->second) {
      if (row.size() != 2) throw ParseError("[link_curve_table] rows need 2 columns");
      sc.link_curve.table.emplace_back(parse_double(row[0], "link_curve_table.sinr_db"),
                                       parse_double(row[1], "link_curve_table.bps"));
    }
  }

  const bool has_sites = file.tables.count("sites") > 0;
  const bool has_layout = file.scalars.count("layout") > 0;
  if (has_sites && has_layout) throw ParseError("give either [sites] or [layout], not both");
  if (!has_sites && !has_layout) throw ParseError("missing [sites] or [layout] section");

  if (has_layout) {
    int n_sites = 0;
    double jitter = 0.0;
    uint64_t seed = 0;
    LayoutDefaults defaults;
    for_each_key(file, "layout", [&](const std::string& k, const std::string& v) {
      if (k == "n_sites") n_sites = static_cast<int>(parse_int(v, "layout." + k));
      else if (k == "jitter_m") jitter = parse_double(v, "layout." + k);
      else if (k == "seed") seed = parse_uint(v, "layout." + k);
      else if (k == "inter_site_distance_m")
        defaults.inter_site_distance_m = parse_double(v, "layout." + k);
      else if (k == "prb_capacity")
        defaults.prb_capacity = static_cast<int>(parse_int(v, "layout." + k));
      else if (k == "tx_power_per_subcarrier_dbm")
        defaults.tx_power_per_subcarrier_dbm = parse_double(v, "layout." + k);
      else if (k == "antenna_gain_dbi")
        defaults.antenna_gain_dbi = parse_double(v, "layout." + k);
      else return false;
      return true;
    });
    sc.sites = generate_layout(n_sites, jitter, seed, defaults);
  } else {
    for (const auto& row : file.tables.at("sites")) {
      if (row.size() != 7) {
        throw ParseError("[sites] rows need 7 columns: id x y band prb_capacity tx_dbm gain_dbi");
      }
      SiteSpec s;
      s.id = static_cast<int>(parse_int(row[0], "sites.id"));
      s.position.x = parse_double(row[1], "sites.x");
      s.position.y = parse_double(row[2], "sites.y");
      s.band_index = static_cast<int>(parse_int(row[3], "sites.band_index"));
      s.prb_capacity = static_cast<int>(parse_int(row[4], "sites.prb_capacity"));
      s.tx_power_per_subcarrier_dbm = parse_double(row[5], "sites.tx_power_per_subcarrier_dbm");
      s.antenna_gain_dbi = parse_double(row[6], "sites.antenna_gain_dbi");
      sc.sites.push_back(s);
    }
  }

  if (const auto it = file.tables.find("hotspots"); it != file.tables.end()) {
    sc.traffic.hotspot_weights.assign(sc.sites.size(), 1.0);
    for (const auto& row : it->second) {
      if (row.size() != 2) throw ParseError("[hotspots] rows need 2 columns: site_id weight");
      const int id = static_cast<int>(parse_int(row[0], "hotspots.site_id"));
      if (id < 0 || id >= static_cast<int>(sc.sites.size())) {
        throw ValidationError("hotspots.site_id: " + std::to_string(id) + " out of range");
      }
      sc.traffic.hotspot_weights[static_cast<size_t>(id)] =
          parse_double(row[1], "hotspots.weight");
    }
  }

  sc.validate_and_resolve();
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path);
}

std::string scenario_to_text(const Scenario& sc) {
  std::ostringstream out;
  const auto d = [](double v) { return format_double(v); };
  out << "[general]\n";
  out << "snapshot_duration_s = " << d(sc.snapshot_duration_s) << "\n";
  out << "sim_duration_s = " << d(sc.sim_duration_s) << "\n";
  out << "rng_seed = " << sc.rng_seed << "\n";
  out << "\n[radio]\n";
  out << "reuse_factor = " << sc.radio.reuse_factor << "\n";
  out << "subcarriers_per_prb = " << sc.radio.subcarriers_per_prb << "\n";
  out << "subcarrier_bandwidth_hz = " << d(sc.radio.subcarrier_bandwidth_hz) << "\n";
  out << "thermal_noise_per_subcarrier_dbm = " << d(sc.radio.thermal_noise_per_subcarrier_dbm)
      << "\n";
  out << "min_prb_per_user = " << sc.radio.min_prb_per_user << "\n";
  out << "max_prb_per_user = " << sc.radio.max_prb_per_user << "\n";
  out << "cac_signal_threshold_dbm = " << d(sc.radio.cac_signal_threshold_dbm) << "\n";
  out << "ho_signal_threshold_dbm = " << d(sc.radio.ho_signal_threshold_dbm) << "\n";
  out << "\n[propagation]\n";
  out << "l0_db = " << d(sc.propagation.l0_db) << "\n";
  out << "path_loss_exponent = " << d(sc.propagation.path_loss_exponent) << "\n";
  out << "shadowing_sigma_db = " << d(sc.propagation.shadowing_sigma_db) << "\n";
  out << "reference_distance_m = " << d(sc.propagation.reference_distance_m) << "\n";
  out << "min_coupling_loss_db = " << d(sc.propagation.min_coupling_loss_db) << "\n";
  out << "\n[traffic]\n";
  out << "arrival_rate = " << d(sc.traffic.arrival_rate) << "\n";
  out << "file_size_bytes = " << d(sc.traffic.file_size_bytes) << "\n";
  out << "user_speed_mps = " << d(sc.traffic.user_speed_mps) << "\n";
  out << "placement_radius_m = " << d(sc.traffic.placement_radius_m) << "\n";
  out << "\n[policy]\n";
  out << "f0_db = " << d(sc.policy.f0_db) << "\n";
  out << "hm_min_db = " << d(sc.policy.hm_min_db) << "\n";
  out << "hm_max_db = " << d(sc.policy.hm_max_db) << "\n";
  out << "order = " << sc.policy.order << "\n";
  out << "hysteresis_db = " << d(sc.policy.hysteresis_db) << "\n";
  out << "adjacency_radius_m = " << d(sc.policy.adjacency_radius_m) << "\n";
  out << "load_smoothing_tau_s = " << d(sc.policy.load_smoothing_tau_s) << "\n";
  out << "warmup_fraction = " << d(sc.policy.warmup_fraction) << "\n";
  out << "ho_eval_every = " << sc.policy.ho_eval_every << "\n";
  out << "margin_update_every = " << sc.policy.margin_update_every << "\n";
  out << "\n[link_curve]\n";
  out << "bandwidth_efficiency = " << d(sc.link_curve.bandwidth_efficiency) << "\n";
  out << "sinr_efficiency = " << d(sc.link_curve.sinr_efficiency) << "\n";
  out << "max_throughput_per_prb_bps = " << d(sc.link_curve.max_throughput_per_prb_bps) << "\n";
  out << "prb_bandwidth_hz = " << d(sc.link_curve.prb_bandwidth_hz) << "\n";
  if (!sc.link_curve.table.empty()) {
    out << "\n[link_curve_table]\n";
    for (const auto& [sinr_db, bps] : sc.link_curve.table) {
      out << d(sinr_db) << "  " << d(bps) << "\n";
    }
  }
  out << "\n[sites]\n";
  out << "# id  x_m  y_m  band  prb_capacity  tx_dbm  gain_dbi\n";
  for (const auto& s : sc.sites) {
    out << s.id << "  " << d(s.position.x) << "  " << d(s.position.y) << "  " << s.band_index
        << "  " << s.prb_capacity << "  " << d(s.tx_power_per_subcarrier_dbm) << "  "
        << d(s.antenna_gain_dbi) << "\n";
  }
  out << "\n[hotspots]\n";
  out << "# site_id  weight\n";
  for (size_t i = 0; i < sc.traffic.hotspot_weights.size(); ++i) {
    out << i << "  " << d(sc.traffic.hotspot_weights[i]) << "\n";
  }
  return out.str();
}

void save_scenario(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scenario file: " + path);
  out << scenario_to_text(scenario);
}

void export_layout_csv(const std::vector<SiteSpec>& sites, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write layout file: " + path);
  out << "id,x,y,band_index,prb_capacity\n";
  for (const auto& s : sites) {
    out << s.id << ',' << format_double(s.position.x) << ',' << format_double(s.position.y)
        << ',' << s.band_index << ',' << s.prb_capacity << "\n";
  }
}

}  // namespace hosim
