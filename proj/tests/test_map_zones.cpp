#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "uvr/rng.hpp"
#include "uvr/road_map.hpp"

using namespace uvr;

namespace {

// Independent zone lookup: scan every zone's geometric extent and pick the
// closest one, lower id first on ties.
ZoneId zone_scan_oracle(const RoadMap& map, Vec2 p) {
  ZoneId best = 0;
  double best_dist = 1e18;
  for (const Zone& z : map.zones()) {
    const Segment& s = map.segment(z.segment);
    const Vec2 a = map.point_on_segment(z.segment, z.start_offset);
    const Vec2 b = map.point_on_segment(z.segment, z.end_offset);
    (void)s;
    const SegmentProjection pr = project_onto_segment(p, a, b);
    if (pr.distance < best_dist - 1e-12) {
      best_dist = pr.distance;
      best = z.id;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("3x3 grid with 2 km blocks") {
  const RoadMap map = RoadMap::build_grid(3, 3, 2000.0, 300.0);
  REQUIRE(map.intersections().size() == 9);
  REQUIRE(map.segments().size() == 12);
  // ceil(2000 / 300) = 7 equal zones of ~285.71 m per segment
  for (const Segment& s : map.segments()) {
    int zones = 0;
    for (const Zone& z : map.zones())
      if (z.segment == s.id) {
        ++zones;
        CHECK(z.end_offset - z.start_offset == Catch::Approx(2000.0 / 7).margin(1e-9));
      }
    CHECK(zones == 7);
  }
  CHECK(map.zones().size() == 12 * 7);
  CHECK(map.blocks().size() == 4);
}

TEST_CASE("minimal 2x2 grid has one zone per segment") {
  const RoadMap map = RoadMap::build_grid(2, 2, 300.0, 300.0);
  REQUIRE(map.intersections().size() == 4);
  REQUIRE(map.segments().size() == 4);
  CHECK(map.zones().size() == 4);
}

TEST_CASE("grid construction rejects bad parameters") {
  CHECK_THROWS_AS(RoadMap::build_grid(1, 3, 1000.0, 300.0), std::invalid_argument);
  CHECK_THROWS_AS(RoadMap::build_grid(3, 1, 1000.0, 300.0), std::invalid_argument);
  CHECK_THROWS_AS(RoadMap::build_grid(3, 3, -5.0, 300.0), std::invalid_argument);
  CHECK_THROWS_AS(RoadMap::build_grid(3, 3, 1000.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(RoadMap::build_grid(3, 3, 1000.0, 301.0), std::invalid_argument);
}

TEST_CASE("zone ids are unique, contiguous, and tile every segment") {
  const RoadMap map = RoadMap::build_grid(3, 4, 1700.0, 250.0);
  std::set<ZoneId> ids;
  for (const Zone& z : map.zones()) ids.insert(z.id);
  REQUIRE(ids.size() == map.zones().size());
  CHECK(*ids.begin() == 1);
  CHECK(*ids.rbegin() == static_cast<ZoneId>(map.zones().size()));

  for (const Segment& s : map.segments()) {
    // brute-force offset scan: every sample lands in exactly one zone range
    double prev_end = 0.0;
    for (const Zone& z : map.zones()) {
      if (z.segment != s.id) continue;
      CHECK(z.start_offset == Catch::Approx(prev_end).margin(1e-9));
      CHECK(z.end_offset - z.start_offset <= map.zone_size() + 1e-9);
      prev_end = z.end_offset;
    }
    CHECK(prev_end == Catch::Approx(s.length).margin(1e-9));
    for (int k = 0; k <= 200; ++k) {
      const double off = s.length * k / 200.0;
      int containing = 0;
      for (const Zone& z : map.zones()) {
        if (z.segment != s.id) continue;
        const bool interior = off > z.start_offset && off < z.end_offset;
        if (interior) ++containing;
      }
      CHECK(containing <= 1);  // disjoint interiors
    }
  }
}

TEST_CASE("zone lookup at segment start and on boundaries") {
  const RoadMap map = RoadMap::build_grid(3, 3, 2000.0, 300.0);
  const Segment& s = map.segments().front();
  const ZoneId first = map.zone_at(s.id, 0.0);
  CHECK(first == map.zone_of(map.point_on_segment(s.id, 0.0)));

  // exactly on a zone boundary: the lower-id zone wins
  const double step = s.length / 7.0;
  const ZoneId at_boundary = map.zone_at(s.id, 3.0 * step);
  CHECK(at_boundary == map.zone_at(s.id, 3.0 * step - 1e-9));
  CHECK(at_boundary + 1 == map.zone_at(s.id, 3.0 * step + 1e-9));
}

TEST_CASE("zone lookup matches the linear-scan oracle on random points") {
  const RoadMap map = RoadMap::build_grid(3, 3, 2000.0, 300.0);
  Rng rng(42);
  for (int i = 0; i < 1000; ++i) {
    const Segment& s =
        map.segments()[rng.below(map.segments().size())];
    const double off = rng.uniform(0.0, s.length);
    const Vec2 p = map.point_on_segment(s.id, off);
    const ZoneId got = map.zone_of(p);
    const ZoneId expected = zone_scan_oracle(map, p);
    REQUIRE(got == expected);
    CHECK(map.zone_of(p) == got);  // pure function: repeated call agrees
  }
}

TEST_CASE("zone ids increase monotonically along a segment") {
  const RoadMap map = RoadMap::build_grid(4, 4, 1333.0, 190.0);
  for (const Segment& s : map.segments()) {
    ZoneId prev = 0;
    for (int k = 0; k <= 500; ++k) {
      const ZoneId z = map.zone_at(s.id, s.length * k / 500.0);
      if (prev != 0) CHECK(z >= prev);
      if (prev != 0 && z != prev) CHECK(z == prev + 1);  // never skips or repeats
      prev = z;
    }
  }
}

TEST_CASE("off-road positions are rejected") {
  const RoadMap map = RoadMap::build_grid(3, 3, 2000.0, 300.0);
  CHECK_THROWS_AS(map.zone_of({1000.0, 1000.0}), std::out_of_range);  // block interior
  CHECK(map.zone_of({1000.0, 4.0}) > 0);                              // within snap tolerance
  CHECK_THROWS_AS(map.zone_of({1000.0, 6.0}), std::out_of_range);     // just beyond it
}

TEST_CASE("zone CSV dump lists every zone") {
  const RoadMap map = RoadMap::build_grid(2, 2, 500.0, 300.0);
  const std::string csv = map.zones_csv();
  std::size_t lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == map.zones().size() + 1);  // header + one line per zone
  CHECK(csv.rfind("zone_id,segment_id,start_offset,end_offset\n", 0) == 0);
}
