#include <catch2/catch_amalgamated.hpp>

#include "uvr/radio.hpp"
#include "uvr/rng.hpp"

using namespace uvr;

namespace {

NodeState vehicle_on(const RoadMap& map, NodeId id, SegmentId seg, double offset) {
  NodeState n;
  n.id = id;
  n.kind = NodeKind::Vehicle;
  const Vec2 p = map.point_on_segment(seg, offset);
  n.pos = {p.x, p.y, 0.0};
  n.segment = seg;
  n.zone = map.zone_at(seg, offset);
  return n;
}

NodeState uav_at(NodeId id, Vec2 p, double alt = 100.0) {
  NodeState n;
  n.id = id;
  n.kind = NodeKind::Uav;
  n.pos = {p.x, p.y, alt};
  return n;
}

// Obstacle oracle: the straight line between two ground positions must not
// pass through any city-block interior.
bool los_oracle(const RoadMap& map, Vec2 a, Vec2 b) {
  for (const Block& blk : map.blocks())
    if (segment_crosses_rect_interior(a, b, blk.lo, blk.hi)) return false;
  return true;
}

}  // namespace

TEST_CASE("vehicles on the same segment hear each other within range") {
  const RoadMap map = RoadMap::build_grid(3, 3, 2000.0, 300.0);
  const LinkModel model;
  const NodeState a = vehicle_on(map, 1, 1, 500.0);
  const NodeState b = vehicle_on(map, 2, 1, 600.0);
  CHECK(in_range(a, b, map, model));
  const NodeState far = vehicle_on(map, 3, 1, 900.0);
  CHECK_FALSE(in_range(a, far, map, model));  // 400 m > range
}

TEST_CASE("buildings block parallel streets one block apart") {
  const RoadMap map = RoadMap::build_grid(3, 3, 100.0, 100.0);  // 100 m blocks
  const LinkModel model;
  // segment 1 is the first horizontal road, segment 3 the parallel one a
  // block north; both positions mid-segment, 100 m apart across the block
  const NodeState a = vehicle_on(map, 1, 1, 50.0);
  const NodeState b = vehicle_on(map, 2, 3, 50.0);
  REQUIRE(distance(a.pos.ground(), b.pos.ground()) == Catch::Approx(100.0));
  CHECK_FALSE(in_range(a, b, map, model));
  // the independent geometric oracle agrees that a building intervenes
  CHECK_FALSE(los_oracle(map, a.pos.ground(), b.pos.ground()));
}

TEST_CASE("vehicles near a shared intersection see around the corner") {
  const RoadMap map = RoadMap::build_grid(3, 3, 2000.0, 300.0);
  const LinkModel model;
  // segment 1 runs from intersection (0,0); segment 7 is the first vertical
  // segment, sharing that intersection
  const NodeState a = vehicle_on(map, 1, 1, 150.0);
  const NodeState b = vehicle_on(map, 2, 7, 200.0);
  REQUIRE(map.shared_intersection(1, 7));
  CHECK(in_range(a, b, map, model));

  // far ends of two adjacent segments: out of radio range entirely
  const NodeState c = vehicle_on(map, 3, 1, 310.0);
  const NodeState d = vehicle_on(map, 4, 7, 310.0);
  CHECK_FALSE(in_range(c, d, map, model));
}

TEST_CASE("relay links ignore obstacles") {
  const RoadMap map = RoadMap::build_grid(3, 3, 100.0, 100.0);
  const LinkModel model;
  const NodeState v = vehicle_on(map, 1, 1, 50.0);
  const NodeState u = uav_at(50, {50.0, 150.0}, 100.0);
  // ground separation 100 m straight across a block; 3-D distance ~141 m
  CHECK(in_range(v, u, map, model));
  CHECK_FALSE(los_oracle(map, v.pos.ground(), u.pos.ground()));
}

TEST_CASE("3-D distance bounds relay links") {
  const RoadMap map = RoadMap::build_grid(3, 3, 2000.0, 300.0);
  const LinkModel model;
  const NodeState v = vehicle_on(map, 1, 1, 0.0);
  CHECK(in_range(v, uav_at(50, {250.0, 0.0}, 100.0), map, model));   // ~269 m
  CHECK_FALSE(in_range(v, uav_at(51, {290.0, 0.0}, 100.0), map, model));  // ~307 m
}

TEST_CASE("link checks are symmetric and relay links depend only on distance") {
  const RoadMap map = RoadMap::build_grid(3, 3, 1000.0, 250.0);
  const LinkModel model;
  Rng rng(99);
  const auto& segs = map.segments();
  for (int i = 0; i < 500; ++i) {
    const Segment& sa = segs[rng.below(segs.size())];
    const Segment& sb = segs[rng.below(segs.size())];
    const NodeState a = vehicle_on(map, 1, sa.id, rng.uniform(0.0, sa.length));
    const NodeState b = vehicle_on(map, 2, sb.id, rng.uniform(0.0, sb.length));
    CHECK(in_range(a, b, map, model) == in_range(b, a, map, model));

    const NodeState u = uav_at(50, {rng.uniform(0.0, 2000.0), rng.uniform(0.0, 2000.0)});
    CHECK(in_range(a, u, map, model) == (distance3(a.pos, u.pos) <= model.uav_range));
    CHECK(in_range(a, u, map, model) == in_range(u, a, map, model));
  }
}

TEST_CASE("neighbor tables prune stale entries and never contain the owner") {
  const RoadMap map = RoadMap::build_grid(3, 3, 2000.0, 300.0);
  NodeState n = vehicle_on(map, 1, 1, 100.0);
  upsert_neighbor(n, 1, {1'000'000, n.pos, NodeKind::Vehicle, n.zone});
  CHECK(n.neighbors.empty());  // self entries are ignored

  upsert_neighbor(n, 2, {1'000'000, n.pos, NodeKind::Vehicle, n.zone});
  upsert_neighbor(n, 3, {2'000'000, n.pos, NodeKind::Vehicle, n.zone});
  prune_neighbors(n, 4'500'000, 3'000'000);
  CHECK(n.neighbors.count(2) == 0);  // 3.5 s old, staleness 3 s
  CHECK(n.neighbors.count(3) == 1);
}

TEST_CASE("zone density counts same-zone vehicles including self") {
  const RoadMap map = RoadMap::build_grid(3, 3, 2000.0, 300.0);
  NodeState n = vehicle_on(map, 1, 1, 100.0);
  const SimTime now = 5'000'000, staleness = 3'000'000;

  CHECK(zone_density(n, now, staleness) == 1);  // empty table: self only

  const ZoneId same = n.zone;
  const ZoneId other = map.zone_at(1, 500.0);
  REQUIRE(same != other);
  upsert_neighbor(n, 2, {now, n.pos, NodeKind::Vehicle, same});
  upsert_neighbor(n, 3, {now, n.pos, NodeKind::Vehicle, same});
  upsert_neighbor(n, 4, {now, n.pos, NodeKind::Vehicle, other});
  upsert_neighbor(n, 50, {now, n.pos, NodeKind::Uav, 0});
  upsert_neighbor(n, 51, {now, n.pos, NodeKind::Uav, same});  // relays never count
  CHECK(zone_density(n, now, staleness) == 3);

  // a 3-vehicle zone reports density 3, as in the worked selection example
  NodeState m = vehicle_on(map, 10, 2, 50.0);
  upsert_neighbor(m, 11, {now, m.pos, NodeKind::Vehicle, m.zone});
  upsert_neighbor(m, 12, {now, m.pos, NodeKind::Vehicle, m.zone});
  CHECK(zone_density(m, now, staleness) == 3);

  // stale same-zone entries are excluded
  upsert_neighbor(n, 5, {now - 4'000'000, n.pos, NodeKind::Vehicle, same});
  CHECK(zone_density(n, now, staleness) == 3);
}
