#pragma once

#include <map>

#include "uvr/geometry.hpp"
#include "uvr/road_map.hpp"
#include "uvr/types.hpp"

namespace uvr {

enum class NodeKind { Vehicle, Uav };

inline const char* to_string(NodeKind k) { return k == NodeKind::Vehicle ? "vehicle" : "uav"; }

struct NeighborEntry {
  SimTime last_heard{0};
  Point3 pos;
  NodeKind kind{NodeKind::Vehicle};
  ZoneId zone{0};
};

// Live per-node view: position, road assignment, and the hello-maintained
// neighbor table. Ordered map keeps iteration deterministic.
struct NodeState {
  NodeId id{0};
  NodeKind kind{NodeKind::Vehicle};
  Point3 pos;
  SegmentId segment{0};  // 0 for UAVs
  ZoneId zone{0};        // 0 for UAVs
  std::map<NodeId, NeighborEntry> neighbors;
};

struct LinkModel {
  double range{300.0};      // vehicle-vehicle range, meters
  double uav_range{300.0};  // range when either endpoint is a UAV
  SimTime per_hop_latency{2'000};
  bool obstacle_rule{true};
  double loss_probability{0.0};
};

// Ground links are blocked by buildings unless the vehicles share a segment
// or are both near a common intersection; links with a UAV endpoint depend
// on distance alone.
inline bool vehicles_line_of_sight(const NodeState& a, const NodeState& b, const RoadMap& map,
                                   double range) {
  if (a.segment == 0 || b.segment == 0) return false;
  if (a.segment == b.segment) return true;
  std::uint32_t shared = 0;
  if (!map.shared_intersection(a.segment, b.segment, &shared)) return false;
  const Vec2 corner = map.intersections()[shared];
  return distance(a.pos.ground(), corner) <= range && distance(b.pos.ground(), corner) <= range;
}

inline bool in_range(const NodeState& a, const NodeState& b, const RoadMap& map,
                     const LinkModel& model) {
  const bool any_uav = a.kind == NodeKind::Uav || b.kind == NodeKind::Uav;
  const double range = any_uav ? model.uav_range : model.range;
  if (distance3(a.pos, b.pos) > range) return false;
  if (any_uav || !model.obstacle_rule) return true;
  return vehicles_line_of_sight(a, b, map, range);
}

inline void upsert_neighbor(NodeState& node, NodeId from, const NeighborEntry& entry) {
  if (from == node.id) return;
  node.neighbors[from] = entry;
}

inline void prune_neighbors(NodeState& node, SimTime now, SimTime staleness) {
  for (auto it = node.neighbors.begin(); it != node.neighbors.end();) {
    if (now - it->second.last_heard > staleness)
      it = node.neighbors.erase(it);
    else
      ++it;
  }
}

// Vehicles in this node's zone, itself included; UAVs never contribute.
inline int zone_density(const NodeState& node, SimTime now, SimTime staleness) {
  int count = 1;
  for (const auto& [id, entry] : node.neighbors) {
    if (now - entry.last_heard > staleness) continue;
    if (entry.kind == NodeKind::Vehicle && entry.zone == node.zone) ++count;
  }
  return count;
}

}  // namespace uvr
