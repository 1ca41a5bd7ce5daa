#include "hosim/link_curve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hosim {

double throughput_per_prb(double sinr, const LinkCurve& curve) {
  if (sinr <= 0.0) return 0.0;
  double thr;
  if (curve.table.empty()) {
    thr = curve.bandwidth_efficiency * curve.prb_bandwidth_hz *
          std::log2(1.0 + sinr / curve.sinr_efficiency);
  } else {
    const double sinr_db = 10.0 * std::log10(sinr);
    const auto& t = curve.table;
    if (sinr_db <= t.front().first) {
      thr = t.front().second;
    } else if (sinr_db >= t.back().first) {
      thr = t.back().second;
    } else {
      size_t hi = 1;
      while (t[hi].first < sinr_db) ++hi;
      const auto& [x0, y0] = t[hi - 1];
      const auto& [x1, y1] = t[hi];
      const double w = (sinr_db - x0) / (x1 - x0);
      thr = y0 + w * (y1 - y0);
    }
  }
  return std::min(thr, curve.max_throughput_per_prb_bps);
}

std::vector<std::pair<double, double>> load_link_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("link curve: cannot open " + path);
  std::vector<std::pair<double, double>> table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double sinr_db = 0.0, bps = 0.0;
    if (!(row >> sinr_db >> bps)) {
      throw std::runtime_error("link curve: bad row at " + path + ":" + std::to_string(line_no));
    }
    table.emplace_back(sinr_db, bps);
  }
  if (table.empty()) throw std::runtime_error("link curve: empty table in " + path);
  if (table.front().second != 0.0) {
    throw std::runtime_error("link curve: first row must map to 0 bps in " + path);
  }
  for (size_t i = 1; i < table.size(); ++i) {
    if (table[i].first <= table[i - 1].first || table[i].second < table[i - 1].second) {
      throw std::runtime_error("link curve: table must be monotone in " + path + " (row " +
                               std::to_string(i + 1) + ")");
    }
  }
  return table;
}

}  // namespace hosim
