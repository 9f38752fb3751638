#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "uvr/mobility.hpp"
#include "uvr/trace.hpp"

using namespace uvr;

TEST_CASE("straight advance along a segment") {
  const RoadMap map = RoadMap::build_grid(3, 3, 2000.0, 300.0);
  Rng rng(1);
  VehicleMobilityState s{1, 1, 500.0, +1, 10.0};
  s = step_vehicle(map, s, 1.0, rng, 60 / 3.6);
  CHECK(s.segment == 1);
  CHECK(s.offset == Catch::Approx(510.0));
  CHECK(s.direction == +1);
  CHECK(s.speed == 10.0);  // speed changes only at intersections
}

TEST_CASE("a parked vehicle stays put") {
  const RoadMap map = RoadMap::build_grid(3, 3, 2000.0, 300.0);
  Rng rng(1);
  VehicleMobilityState s{1, 4, 123.0, -1, 0.0};
  s = step_vehicle(map, s, 5.0, rng, 60 / 3.6);
  CHECK(s.segment == 4);
  CHECK(s.offset == 123.0);
}

TEST_CASE("turning at an intersection keeps the state on the map") {
  const RoadMap map = RoadMap::build_grid(3, 3, 1000.0, 250.0);
  Rng rng(7);
  VehicleMobilityState s{1, 1, 990.0, +1, 15.0};
  for (int i = 0; i < 2000; ++i) {
    s = step_vehicle(map, s, 0.1, rng, 60 / 3.6);
    const Segment& seg = map.segment(s.segment);
    REQUIRE(s.offset >= 0.0);
    REQUIRE(s.offset <= seg.length);
    REQUIRE(s.speed >= 0.0);
    REQUIRE(s.speed <= 60 / 3.6);
  }
}

TEST_CASE("a wandering vehicle eventually visits every segment") {
  const RoadMap map = RoadMap::build_grid(3, 3, 2000.0, 300.0);
  Rng rng(12345);
  VehicleMobilityState s{1, 1, 0.0, +1, 12.0};
  std::set<SegmentId> visited;
  for (int i = 0; i < 10'000; ++i) {
    s = step_vehicle(map, s, 1.0, rng, 60 / 3.6);
    visited.insert(s.segment);
  }
  CHECK(visited.size() == map.segments().size());
}

TEST_CASE("identical seeds replay identical trajectories") {
  const RoadMap map = RoadMap::build_grid(3, 3, 1500.0, 300.0);
  for (int run = 0; run < 2; ++run) {
    Rng a(42), b(42);
    VehicleMobilityState sa{1, 2, 10.0, +1, 14.0};
    VehicleMobilityState sb = sa;
    for (int i = 0; i < 3000; ++i) {
      sa = step_vehicle(map, sa, 0.1, a, 60 / 3.6);
      sb = step_vehicle(map, sb, 0.1, b, 60 / 3.6);
      REQUIRE(sa.segment == sb.segment);
      REQUIRE(sa.offset == sb.offset);
      REQUIRE(sa.speed == sb.speed);
    }
  }
}

TEST_CASE("patrol loop closure and bounding-box containment") {
  UavMobilityState u;
  u.bbox_lo = {0.0, 0.0};
  u.bbox_hi = {2000.0, 2000.0};
  u.loop_pos = 300.0;
  u.altitude = 100.0;
  u.speed = 20.0;

  const double perimeter = patrol_perimeter(u);
  CHECK(perimeter == Catch::Approx(8000.0));

  const Vec2 start = uav_position(u);
  UavMobilityState looped = step_uav(u, perimeter / u.speed);  // one full loop
  const Vec2 end = uav_position(looped);
  CHECK(end.x == Catch::Approx(start.x).margin(1e-6));
  CHECK(end.y == Catch::Approx(start.y).margin(1e-6));

  UavMobilityState s = u;
  for (int i = 0; i < 1000; ++i) {
    s = step_uav(s, 0.7);
    const Vec2 p = uav_position(s);
    REQUIRE(p.x >= u.bbox_lo.x);
    REQUIRE(p.x <= u.bbox_hi.x);
    REQUIRE(p.y >= u.bbox_lo.y);
    REQUIRE(p.y <= u.bbox_hi.y);
  }
}

TEST_CASE("16 patrol assignments cover all 12 segments of a 3x3 grid") {
  const RoadMap map = RoadMap::build_grid(3, 3, 2000.0, 300.0);
  const std::vector<int> assignment = assign_patrol_blocks(map, 16);
  REQUIRE(assignment.size() == 16);
  std::set<SegmentId> covered;
  for (int b : assignment)
    for (SegmentId e : map.blocks()[static_cast<std::size_t>(b)].edges) covered.insert(e);
  // exhaustive check: every segment belongs to at least one patrol area
  for (const Segment& s : map.segments()) CHECK(covered.count(s.id) == 1);
}

TEST_CASE("too few patrol assignments cover greedily, most segments first") {
  const RoadMap map = RoadMap::build_grid(3, 3, 2000.0, 300.0);
  const std::vector<int> assignment = assign_patrol_blocks(map, 2);
  REQUIRE(assignment.size() == 2);
  std::set<SegmentId> covered;
  for (int b : assignment)
    for (SegmentId e : map.blocks()[static_cast<std::size_t>(b)].edges) covered.insert(e);
  CHECK(covered.size() == 8);  // two disjoint blocks of four edges
}

TEST_CASE("train offsets keep consecutive members within radio range") {
  const auto offsets = uav_loop_offsets(8000.0, 4);
  REQUIRE(offsets.size() == 4);
  for (std::size_t i = 1; i < offsets.size(); ++i)
    CHECK(offsets[i] - offsets[i - 1] == Catch::Approx(kUavTrainSpacing));
}

TEST_CASE("trace interpolation is linear and exact at samples") {
  std::istringstream in("0 1 0 0\n10 1 100 0\n");
  const Trace t = Trace::parse(in);
  CHECK(t.position_at(1, 5.0).x == Catch::Approx(50.0));
  CHECK(t.position_at(1, 0.0).x == 0.0);
  CHECK(t.position_at(1, 10.0).x == 100.0);
  // clamped outside the recorded span
  CHECK(t.position_at(1, 25.0).x == 100.0);
  CHECK_FALSE(t.is_uav(1));
}

TEST_CASE("trace parse failures carry line numbers") {
  std::istringstream empty("");
  CHECK_THROWS_AS(Trace::parse(empty), TraceError);

  std::istringstream garbage("0 1 0 0\nnot a record\n");
  try {
    Trace::parse(garbage, "bad.trace");
    FAIL("expected a parse error");
  } catch (const TraceError& e) {
    CHECK(std::string(e.what()).find("bad.trace:2") != std::string::npos);
  }

  std::istringstream backwards("5 1 0 0\n3 1 10 0\n");
  CHECK_THROWS_AS(Trace::parse(backwards), TraceError);
}

TEST_CASE("trace save/load round-trips positions exactly") {
  Trace t;
  t.append(1, 0.0, {0.123456789012345, 7.0, 0.0});
  t.append(1, 0.1, {1.987654321098765, 8.5, 0.0});
  t.append(9, 0.0, {100.0, 200.0, 100.0});
  std::ostringstream out;
  t.save(out);
  std::istringstream in(out.str());
  const Trace back = Trace::parse(in);
  CHECK(back.position_at(1, 0.1).x == 1.987654321098765);
  CHECK(back.position_at(9, 0.0).alt == 100.0);
  CHECK(back.is_uav(9));
}
