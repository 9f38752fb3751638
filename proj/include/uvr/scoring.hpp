#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "uvr/packets.hpp"

namespace uvr {

// Floor applied to a path's delay before scoring, so a zero accumulated
// delay (direct neighbor discovery) cannot divide by zero.
inline constexpr SimTime kScoreDelayFloor = 1'000;  // 1 ms

// Mean vehicle density over the path's zones.
inline double compute_average(const PathRecord& path) {
  const int n_z = path.zone_count();
  if (n_z == 0) throw std::domain_error("degenerate path: no zone entries");
  return static_cast<double>(path.nb_vehicles) / n_z;
}

// Population standard deviation of the per-zone densities; 0 means the
// vehicles are evenly spread along the path.
inline double compute_sdeviation(const PathRecord& path) {
  const int n_z = path.zone_count();
  if (n_z == 0) throw std::domain_error("degenerate path: no zone entries");
  const double avg = compute_average(path);
  double sum_sq = 0.0;
  for (const auto& e : path.entries) {
    if (!e.is_zone()) continue;
    const double d = e.density - avg;
    sum_sq += d * d;
  }
  return std::sqrt(sum_sq / n_z);
}

// Path score: rewards well-populated paths, penalises slow or unevenly
// populated ones and every UAV hop. Caches the derived metrics.
inline double compute_score(PathRecord& path, SimTime delay_floor = kScoreDelayFloor) {
  path.average = compute_average(path);
  path.s_deviation = compute_sdeviation(path);
  const double delay_s = s_from_us(std::max(path.delay, delay_floor));
  path.score =
      (path.nb_vehicles / delay_s) * (1.0 / (1.0 + path.s_deviation + path.uav_hops()));
  return path.score;
}

// Deterministic preference order used both for selection and for ranking
// alternative paths: higher score, then fewer UAV hops, then smaller delay,
// then the lexicographically smaller zone-id sequence.
inline bool path_preferred(const PathRecord& a, const PathRecord& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.uav_hops() != b.uav_hops()) return a.uav_hops() < b.uav_hops();
  if (a.delay != b.delay) return a.delay < b.delay;
  const std::size_t n = std::min(a.entries.size(), b.entries.size());
  for (std::size_t i = 0; i < n; ++i) {
    const ZoneId za = a.entries[i].is_zone() ? a.entries[i].zone : 0;
    const ZoneId zb = b.entries[i].is_zone() ? b.entries[i].zone : 0;
    if (za != zb) return za < zb;
  }
  return a.entries.size() < b.entries.size();
}

// Scores every candidate and returns the index of the best one. A single
// candidate is taken directly (scoring a lone path decides nothing), but
// its derived fields are still cached for later maintenance ranking.
inline std::size_t select_path(std::vector<PathRecord>& candidates,
                               SimTime delay_floor = kScoreDelayFloor) {
  if (candidates.empty()) throw std::invalid_argument("select_path: no candidates");
  for (PathRecord& p : candidates) compute_score(p, delay_floor);
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i)
    if (path_preferred(candidates[i], candidates[best])) best = i;
  return best;
}

}  // namespace uvr
