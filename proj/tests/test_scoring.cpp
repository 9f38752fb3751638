#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "uvr/rng.hpp"
#include "uvr/scoring.hpp"

using namespace uvr;

namespace {

PathRecord make_path(const std::vector<std::pair<ZoneId, int>>& zones, double delay_s,
                     int uav_hops_after = 0) {
  PathRecord p;
  for (auto [z, d] : zones) p.entries.push_back(TransitEntry::zone_entry(z, d));
  for (int i = 0; i < uav_hops_after; ++i)
    p.entries.push_back(TransitEntry::uav_entry(900 + static_cast<NodeId>(i)));
  p.nb_vehicles = p.density_sum();
  p.delay = us_from_s(delay_s);
  return p;
}

// Independent evaluation of the three selection formulas straight from raw
// densities; deliberately avoids PathRecord's cached fields.
struct OracleResult {
  double average, sdev, score;
};
OracleResult score_oracle(const std::vector<int>& densities, double delay_s, int uav_hops) {
  double nb = 0;
  for (int d : densities) nb += d;
  const double avg = nb / densities.size();
  double ss = 0;
  for (int d : densities) ss += (d - avg) * (d - avg);
  const double sdev = std::sqrt(ss / densities.size());
  const double score = (nb / delay_s) * (1.0 / (1.0 + sdev + uav_hops));
  return {avg, sdev, score};
}

// The worked three-path example: zone densities, delays, one relay hop on
// the second path. The second path's vehicle total is kept consistent with
// its per-zone densities (the sum, 14).
const std::vector<std::pair<ZoneId, int>> kPath1Zones = {{1, 1}, {2, 2}, {3, 3}, {4, 2},
                                                         {5, 2}, {6, 1}, {7, 1}, {8, 1},
                                                         {9, 2}, {10, 2}, {11, 1}, {12, 1}};
const std::vector<std::pair<ZoneId, int>> kPath3Zones = {{1, 1},  {13, 2}, {14, 1}, {15, 2},
                                                         {16, 1}, {17, 1}, {18, 1}, {19, 2},
                                                         {20, 1}, {21, 1}, {11, 1}, {12, 1}};

PathRecord table_path2() {
  PathRecord p;
  for (auto [z, d] : std::vector<std::pair<ZoneId, int>>{{1, 1}, {2, 2}, {3, 3}, {4, 2}})
    p.entries.push_back(TransitEntry::zone_entry(z, d));
  p.entries.push_back(TransitEntry::uav_entry(501));
  for (auto [z, d] : std::vector<std::pair<ZoneId, int>>{{9, 2}, {10, 2}, {11, 1}, {12, 1}})
    p.entries.push_back(TransitEntry::zone_entry(z, d));
  p.nb_vehicles = p.density_sum();
  p.delay = us_from_s(1.5);
  return p;
}

std::vector<int> densities_of(const PathRecord& p) {
  std::vector<int> out;
  for (const auto& e : p.entries)
    if (e.is_zone()) out.push_back(e.density);
  return out;
}

}  // namespace

TEST_CASE("average vehicle count per zone") {
  PathRecord p1 = make_path(kPath1Zones, 1.0);
  CHECK(p1.nb_vehicles == 19);
  CHECK(compute_average(p1) == Catch::Approx(19.0 / 12).epsilon(1e-9));

  PathRecord p3 = make_path(kPath3Zones, 4.5);
  CHECK(p3.nb_vehicles == 15);
  CHECK(compute_average(p3) == Catch::Approx(1.25).epsilon(1e-9));

  PathRecord uniform = make_path({{1, 4}, {2, 4}, {3, 4}}, 1.0);
  CHECK(compute_average(uniform) == Catch::Approx(4.0));
}

TEST_CASE("density standard deviation") {
  PathRecord uniform = make_path({{1, 3}, {2, 3}, {3, 3}, {4, 3}}, 2.0);
  CHECK(compute_sdeviation(uniform) == 0.0);

  PathRecord p1 = make_path(kPath1Zones, 1.0);
  const OracleResult o1 = score_oracle(densities_of(p1), 1.0, 0);
  CHECK(compute_sdeviation(p1) == Catch::Approx(o1.sdev).margin(1e-12));
  CHECK(compute_sdeviation(p1) == Catch::Approx(0.64010).margin(1e-5));

  PathRecord p3 = make_path(kPath3Zones, 4.5);
  const OracleResult o3 = score_oracle(densities_of(p3), 4.5, 0);
  CHECK(compute_sdeviation(p3) == Catch::Approx(o3.sdev).margin(1e-12));
  CHECK(compute_sdeviation(p3) == Catch::Approx(0.43301).margin(1e-5));
}

TEST_CASE("degenerate paths without zone entries are rejected") {
  PathRecord p;
  p.entries.push_back(TransitEntry::uav_entry(7));
  p.nb_vehicles = 0;
  CHECK_THROWS_AS(compute_average(p), std::domain_error);
  CHECK_THROWS_AS(compute_sdeviation(p), std::domain_error);
}

TEST_CASE("path scores for the worked three-path example") {
  PathRecord p1 = make_path(kPath1Zones, 1.0);
  PathRecord p3 = make_path(kPath3Zones, 4.5);
  PathRecord p2 = table_path2();

  const OracleResult o1 = score_oracle(densities_of(p1), 1.0, 0);
  const OracleResult o3 = score_oracle(densities_of(p3), 4.5, 0);
  const OracleResult o2 = score_oracle(densities_of(p2), 1.5, 1);

  CHECK(compute_score(p1) == Catch::Approx(o1.score).margin(1e-9));
  CHECK(compute_score(p3) == Catch::Approx(o3.score).margin(1e-9));
  CHECK(compute_score(p2) == Catch::Approx(o2.score).margin(1e-9));

  CHECK(p1.score == Catch::Approx(11.5846).margin(1e-3));
  CHECK(p3.score == Catch::Approx(2.3261).margin(1e-3));

  // derived fields are cached by the scoring pass
  CHECK(p1.average == Catch::Approx(o1.average));
  CHECK(p1.s_deviation == Catch::Approx(o1.sdev));
}

TEST_CASE("each relay hop strictly lowers the score") {
  double prev = 0.0;
  for (int uavs = 0; uavs < 4; ++uavs) {
    PathRecord p = make_path({{1, 2}, {2, 3}, {3, 2}}, 1.5, uavs);
    compute_score(p);
    if (uavs > 0) CHECK(p.score < prev);
    prev = p.score;
  }
}

TEST_CASE("zero accumulated delay uses the scoring floor") {
  PathRecord p = make_path({{1, 2}}, 0.0);
  CHECK(p.delay == 0);
  compute_score(p);
  CHECK(p.score == Catch::Approx(2.0 / 1e-3));  // floored at 1 ms
}

TEST_CASE("selection picks the best-scoring path of the worked example") {
  std::vector<PathRecord> candidates = {make_path(kPath3Zones, 4.5), table_path2(),
                                        make_path(kPath1Zones, 1.0)};
  const std::size_t best = select_path(candidates);
  CHECK(best == 2);  // the 19-vehicle, 1-second path
  CHECK(candidates[best].score > candidates[0].score);
  CHECK(candidates[best].score > candidates[1].score);
}

TEST_CASE("selection of a single candidate returns it directly") {
  std::vector<PathRecord> candidates = {make_path({{4, 2}, {5, 1}}, 2.0)};
  CHECK(select_path(candidates) == 0);
  CHECK(candidates[0].score > 0.0);  // derived fields still cached
}

TEST_CASE("selection tie-breaks prefer smaller delay at equal score") {
  // same per-zone structure scaled so both paths score identically
  PathRecord slow = make_path({{1, 2}, {2, 2}}, 2.0);
  PathRecord fast = make_path({{1, 1}, {2, 1}}, 1.0);
  std::vector<PathRecord> candidates = {slow, fast};
  const std::size_t best = select_path(candidates);
  CHECK(candidates[0].score == candidates[1].score);
  CHECK(best == 1);  // smaller delay wins the tie

  std::vector<PathRecord> same = {slow, slow};
  CHECK(select_path(same) == 0);  // full tie keeps the first
}

TEST_CASE("randomized score properties") {
  Rng rng(2024);
  for (int i = 0; i < 2000; ++i) {
    const int zones = rng.uniform_int(1, 15);
    std::vector<std::pair<ZoneId, int>> spec;
    for (int z = 0; z < zones; ++z)
      spec.emplace_back(static_cast<ZoneId>(z + 1), rng.uniform_int(1, 9));
    const double delay_s = rng.uniform(0.05, 8.0);
    const int uavs = rng.uniform_int(0, 3);
    PathRecord p = make_path(spec, delay_s, uavs);
    compute_score(p);

    // more vehicles at unchanged dispersion raises the score
    PathRecord uniform_bump = p;
    for (auto& e : uniform_bump.entries)
      if (e.is_zone()) {
        e.density += 1;
        uniform_bump.nb_vehicles += 1;
      }
    compute_score(uniform_bump);
    CHECK(uniform_bump.score > p.score);

    // monotone decreasing in delay
    PathRecord slower = p;
    slower.delay = p.delay + us_from_s(0.5);
    compute_score(slower);
    CHECK(slower.score < p.score);

    // s_deviation = 0 iff densities uniform
    bool uniform = true;
    int first = -1;
    for (const auto& e : p.entries)
      if (e.is_zone()) {
        if (first < 0) first = e.density;
        uniform = uniform && e.density == first;
      }
    CHECK((p.s_deviation == 0.0) == uniform);
  }
}

TEST_CASE("argmax unchanged when all delays scale together") {
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<PathRecord> candidates;
    const int n = rng.uniform_int(2, 6);
    for (int c = 0; c < n; ++c) {
      const int zones = rng.uniform_int(1, 10);
      std::vector<std::pair<ZoneId, int>> spec;
      for (int z = 0; z < zones; ++z)
        spec.emplace_back(static_cast<ZoneId>(z + 1), rng.uniform_int(1, 6));
      candidates.push_back(make_path(spec, rng.uniform(0.2, 5.0), rng.uniform_int(0, 2)));
    }
    std::vector<PathRecord> scaled = candidates;
    const double k = rng.uniform(0.5, 4.0);
    for (PathRecord& p : scaled) p.delay = static_cast<SimTime>(p.delay * k);
    CHECK(select_path(candidates) == select_path(scaled));
  }
}
