#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "uvr/rng.hpp"
#include "uvr/road_map.hpp"

namespace uvr {

struct VehicleMobilityState {
  NodeId node{0};
  SegmentId segment{0};
  double offset{0.0};
  int direction{+1};  // +1 toward endpoint_b, -1 toward endpoint_a
  double speed{0.0};  // m/s
};

// UAVs patrol the bounding box of a small group of road segments as a
// rectangular loop at constant altitude, parameterised by arc length.
struct UavMobilityState {
  NodeId node{0};
  std::vector<SegmentId> patrol_area;  // at most 4 segments
  Vec2 bbox_lo;
  Vec2 bbox_hi;
  double loop_pos{0.0};  // arc-length position along the loop
  double altitude{100.0};
  double speed{0.0};  // m/s
};

inline double patrol_perimeter(const UavMobilityState& s) {
  return 2.0 * ((s.bbox_hi.x - s.bbox_lo.x) + (s.bbox_hi.y - s.bbox_lo.y));
}

inline Vec2 uav_position(const UavMobilityState& s) {
  const double w = s.bbox_hi.x - s.bbox_lo.x;
  const double h = s.bbox_hi.y - s.bbox_lo.y;
  double t = s.loop_pos;
  if (t < w) return {s.bbox_lo.x + t, s.bbox_lo.y};
  t -= w;
  if (t < h) return {s.bbox_hi.x, s.bbox_lo.y + t};
  t -= h;
  if (t < w) return {s.bbox_hi.x - t, s.bbox_hi.y};
  t -= w;
  return {s.bbox_lo.x, s.bbox_hi.y - std::min(t, h)};
}

inline UavMobilityState step_uav(UavMobilityState state, double dt) {
  const double perimeter = patrol_perimeter(state);
  if (perimeter > 0.0) state.loop_pos = std::fmod(state.loop_pos + state.speed * dt, perimeter);
  return state;
}

// Manhattan grid motion: straight advance at the current speed, a uniformly
// random turn at every intersection (u-turn with probability `uturn_prob`),
// and a fresh uniform speed draw per intersection.
inline VehicleMobilityState step_vehicle(const RoadMap& map, VehicleMobilityState state, double dt,
                                         Rng& rng, double max_speed, double uturn_prob = 0.1) {
  double remaining = state.speed * dt;
  while (remaining > 0.0) {
    const Segment& seg = map.segment(state.segment);
    const double space = state.direction > 0 ? seg.length - state.offset : state.offset;
    if (remaining <= space) {
      state.offset += state.direction * remaining;
      break;
    }
    remaining -= space;
    const std::uint32_t node_idx = state.direction > 0 ? seg.endpoint_b : seg.endpoint_a;
    const auto& adjacent = map.segments_at_intersection(node_idx);

    const bool u_turn = rng.chance(uturn_prob) || adjacent.size() == 1;
    SegmentId next = state.segment;
    if (!u_turn) {
      // uniform pick among the other segments at this intersection
      std::uint32_t others = static_cast<std::uint32_t>(adjacent.size()) - 1;
      std::uint32_t pick = static_cast<std::uint32_t>(rng.below(others));
      for (SegmentId cand : adjacent) {
        if (cand == state.segment) continue;
        if (pick == 0) {
          next = cand;
          break;
        }
        --pick;
      }
    }

    if (next == state.segment) {
      state.offset = (node_idx == seg.endpoint_a) ? 0.0 : seg.length;
      state.direction = (node_idx == seg.endpoint_a) ? +1 : -1;
    } else {
      const Segment& ns = map.segment(next);
      state.segment = next;
      if (ns.endpoint_a == node_idx) {
        state.offset = 0.0;
        state.direction = +1;
      } else {
        state.offset = ns.length;
        state.direction = -1;
      }
    }
    state.speed = rng.uniform(0.0, max_speed);
    if (state.speed <= 0.0) break;  // parked at the intersection for the rest of the step
  }
  return state;
}

// Spacing between successive UAVs on the same patrol loop. Just under the
// radio range, so the UAVs sharing a loop fly as a connected train able to
// bridge road gaps far wider than a single UAV could span.
inline constexpr double kUavTrainSpacing = 280.0;

// Start offsets along a patrol loop for `count` UAVs sharing it: a single
// train with kUavTrainSpacing between consecutive members.
inline std::vector<double> uav_loop_offsets(double perimeter, int count) {
  std::vector<double> offsets;
  if (count <= 0 || perimeter <= 0.0) return offsets;
  for (int i = 0; i < count; ++i)
    offsets.push_back(std::fmod(i * kUavTrainSpacing, perimeter));
  return offsets;
}

// Assigns each UAV a patrol block so that all road segments end up covered
// when enough UAVs are available: greedy set cover over city blocks, then
// round-robin for the remaining UAVs. Returns a block index per UAV.
inline std::vector<int> assign_patrol_blocks(const RoadMap& map, int uav_count) {
  const auto& blocks = map.blocks();
  std::vector<int> assignment;
  assignment.reserve(uav_count);
  if (blocks.empty() || uav_count <= 0) return assignment;

  std::vector<bool> covered(map.segments().size() + 1, false);
  std::size_t uncovered = map.segments().size();
  while (static_cast<int>(assignment.size()) < uav_count && uncovered > 0) {
    int best = -1;
    int best_gain = -1;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      int gain = 0;
      for (SegmentId e : blocks[b].edges)
        if (!covered[e]) ++gain;
      if (gain > best_gain) {
        best_gain = gain;
        best = static_cast<int>(b);
      }
    }
    if (best_gain <= 0) break;
    for (SegmentId e : blocks[static_cast<std::size_t>(best)].edges) {
      if (!covered[e]) {
        covered[e] = true;
        --uncovered;
      }
    }
    assignment.push_back(best);
  }
  for (std::size_t i = assignment.size(); i < static_cast<std::size_t>(uav_count); ++i)
    assignment.push_back(static_cast<int>(i % blocks.size()));
  return assignment;
}

}  // namespace uvr
