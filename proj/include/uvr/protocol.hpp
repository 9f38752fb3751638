#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "uvr/packets.hpp"
#include "uvr/radio.hpp"
#include "uvr/road_map.hpp"
#include "uvr/scoring.hpp"

namespace uvr {

struct ProtocolParams {
  SimTime per_hop_delay{102'000};   // added to the RREQ delay field per relay
  SimTime rreq_lifetime{3'000'000}; // relative expiry budget
  int rreq_max_hops{40};
  SimTime collection_window{500'000};  // destination wait after the first RREQ
  SimTime discovery_timeout{5'000'000};
  int retry_budget{2};  // RERR-triggered rediscoveries tolerated per flow
  SimTime neighbor_staleness{3'000'000};
  SimTime score_delay_floor{kScoreDelayFloor};
  int forward_hop_limit{64};  // safety bound on any single packet journey
  // When false, a vehicle whose zone is already on the RREQ stays silent
  // (drops instead of relaying). The silent variant can partition the
  // flood at zone boundaries, so relaying is the default.
  bool relay_in_listed_zone{true};
};

inline RreqPacket make_rreq(const NodeState& source, NodeId destination, std::uint32_t seq,
                            SimTime now, const ProtocolParams& params) {
  RreqPacket rreq;
  rreq.id = {source.id, seq};
  rreq.source = source.id;
  rreq.destination = destination;
  rreq.delay = 0;
  rreq.expiry = now + params.rreq_lifetime;
  rreq.max_hops = params.rreq_max_hops;
  const int density = zone_density(source, now, params.neighbor_staleness);
  rreq.transited.push_back(TransitEntry::zone_entry(source.zone, density));
  rreq.nb_vehicles = density;
  return rreq;
}

enum class RreqActionKind { Drop, Rebroadcast, DeliverToDestination };

struct RreqAction {
  RreqActionKind kind{RreqActionKind::Drop};
  RreqPacket updated;
};

// Per-node RREQ handling. `seen` is the node's duplicate-suppression cache;
// the destination does not consult it so that every distinct arrival can be
// collected as a path candidate while its timer runs.
inline RreqAction handle_rreq(const NodeState& node, std::unordered_set<std::uint64_t>& seen,
                              const RreqPacket& rreq, SimTime now, const ProtocolParams& params) {
  if (now > rreq.expiry || rreq.hop_count >= rreq.max_hops) return {RreqActionKind::Drop, {}};
  if (node.id == rreq.destination) return {RreqActionKind::DeliverToDestination, rreq};
  if (seen.count(rreq.id.key())) return {RreqActionKind::Drop, {}};
  seen.insert(rreq.id.key());

  RreqPacket out = rreq;
  out.hop_count += 1;
  out.delay += params.per_hop_delay;
  if (node.kind == NodeKind::Uav) {
    out.transited.push_back(TransitEntry::uav_entry(node.id));
    return {RreqActionKind::Rebroadcast, out};
  }
  const bool listed = [&] {
    for (const auto& e : rreq.transited)
      if (e.is_zone() && e.zone == node.zone) return true;
    return false;
  }();
  if (listed) {
    if (!params.relay_in_listed_zone) return {RreqActionKind::Drop, {}};
    return {RreqActionKind::Rebroadcast, out};  // relay without appending
  }
  const int density = zone_density(node, now, params.neighbor_staleness);
  out.transited.push_back(TransitEntry::zone_entry(node.zone, density));
  out.nb_vehicles += density;
  return {RreqActionKind::Rebroadcast, out};
}

// Greedy geographic forwarding restricted to a path: the next hop must be a
// neighbor in one of the path's remaining zones (or a UAV listed on the
// path) and must make strict distance progress toward the target. A vehicle
// that finds no progressive candidate may still hand the packet to an
// on-path UAV (bridge entry); UAV holders always require progress, which
// keeps forwarding loop-free. The target node itself is returned as soon
// as it appears in the table.
inline std::optional<NodeId> greedy_next_hop(
    const NodeState& node, NodeId target_node, Vec2 target_location,
    std::span<const TransitEntry> path, int cursor, SimTime now, const ProtocolParams& params,
    const std::unordered_set<NodeId>* excluded = nullptr, NodeId prev_hop = 0) {
  const auto fresh = [&](const NeighborEntry& e) {
    return now - e.last_heard <= params.neighbor_staleness;
  };
  const auto is_excluded = [&](NodeId id) { return excluded && excluded->count(id); };

  const auto dest_it = node.neighbors.find(target_node);
  if (dest_it != node.neighbors.end() && fresh(dest_it->second) && !is_excluded(target_node))
    return target_node;

  const auto on_path = [&](NodeId id, const NeighborEntry& entry) {
    if (entry.kind == NodeKind::Vehicle) {
      for (std::size_t i = static_cast<std::size_t>(std::max(cursor, 0)); i < path.size(); ++i)
        if (path[i].is_zone() && path[i].zone == entry.zone) return true;
      return false;
    }
    for (const auto& e : path)
      if (!e.is_zone() && e.uav == id) return true;
    return false;
  };

  const double own_dist = distance(node.pos.ground(), target_location);
  std::optional<NodeId> best;
  double best_dist = own_dist;
  for (const auto& [id, entry] : node.neighbors) {
    if (!fresh(entry) || is_excluded(id)) continue;
    if (!on_path(id, entry)) continue;
    const double d = distance(entry.pos.ground(), target_location);
    if (d < best_dist) {  // strict progress; ties keep the lower id (map order)
      best_dist = d;
      best = id;
    }
  }
  if (best || node.kind == NodeKind::Uav) return best;

  // bridge entry: a stuck vehicle offers the packet to the nearest-to-target
  // on-path UAV even when that means no immediate progress
  best_dist = 0.0;
  for (const auto& [id, entry] : node.neighbors) {
    if (entry.kind != NodeKind::Uav || !fresh(entry)) continue;
    if (is_excluded(id) || id == prev_hop) continue;
    if (!on_path(id, entry)) continue;
    const double d = distance(entry.pos.ground(), target_location);
    if (!best || d < best_dist) {
      best_dist = d;
      best = id;
    }
  }
  return best;
}

// Index of this node's position on a path, for cursor advancement. UAVs
// match their listed id; vehicles match their current zone.
inline int path_position(const NodeState& node, std::span<const TransitEntry> path, int cursor) {
  for (std::size_t i = static_cast<std::size_t>(std::max(cursor, 0)); i < path.size(); ++i) {
    const auto& e = path[i];
    if (node.kind == NodeKind::Uav ? (!e.is_zone() && e.uav == node.id)
                                   : (e.is_zone() && e.zone == node.zone))
      return static_cast<int>(i);
  }
  return cursor;
}

inline RrepPacket build_rrep(const NodeState& destination, const RreqId& id, NodeId source,
                             std::vector<PathRecord> candidates, std::size_t selected,
                             const RoadMap& map) {
  RrepPacket rrep;
  rrep.id = id;
  rrep.source = source;
  rrep.destination = destination.id;
  rrep.destination_location = destination.pos.ground();
  rrep.selected = candidates[selected];
  rrep.discovered = std::move(candidates);
  rrep.return_entries.assign(rrep.selected.entries.rbegin(), rrep.selected.entries.rend());
  rrep.cursor = 0;
  for (const auto& e : rrep.selected.entries)
    if (e.is_zone()) {
      rrep.source_location = map.zone_center(e.zone);  // source's discovery-time zone
      break;
    }
  return rrep;
}

enum class DataActionKind { Forward, SwitchPath, EmitRerr };

struct DataAction {
  DataActionKind kind{DataActionKind::EmitRerr};
  NodeId next{0};
  DataPacket updated;
  RerrPacket rerr;
};

// Ranks alternatives by their stored discovery-time scores, best first.
inline std::vector<std::size_t> alternative_order(const std::vector<PathRecord>& alternatives) {
  std::vector<std::size_t> order(alternatives.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return path_preferred(alternatives[a], alternatives[b]);
  });
  return order;
}

inline RerrPacket build_rerr(const NodeState& node, const DataPacket& packet, const RoadMap& map) {
  RerrPacket rerr;
  rerr.flow = packet.flow;
  rerr.seq = packet.seq;
  rerr.reporter = node.id;
  rerr.source = packet.source;
  // first zone beyond the traversed portion; falls back to the last zone
  rerr.broken_zone = 0;
  for (std::size_t i = static_cast<std::size_t>(packet.cursor) + 1;
       i < packet.active.entries.size(); ++i)
    if (packet.active.entries[i].is_zone()) {
      rerr.broken_zone = packet.active.entries[i].zone;
      break;
    }
  if (rerr.broken_zone == 0) {
    for (auto it = packet.active.entries.rbegin(); it != packet.active.entries.rend(); ++it)
      if (it->is_zone()) {
        rerr.broken_zone = it->zone;
        break;
      }
  }
  const auto& entries = packet.active.entries;
  const auto end = entries.begin() + std::min<std::size_t>(packet.cursor + 1, entries.size());
  rerr.return_entries.assign(std::make_reverse_iterator(end), entries.rend());
  rerr.cursor = 0;
  for (const auto& e : entries)
    if (e.is_zone()) {
      rerr.source_location = map.zone_center(e.zone);
      break;
    }
  return rerr;
}

// Data-plane decision at the current holder: forward along the active path,
// switch to the best still-reachable alternative (a neighboring UAV listed
// on an alternative qualifies as its entry point), or report a route error.
inline DataAction forward_data(const NodeState& node, const DataPacket& packet, SimTime now,
                               const ProtocolParams& params, const RoadMap& map,
                               const std::unordered_set<NodeId>* excluded = nullptr) {
  DataPacket pkt = packet;
  pkt.cursor = path_position(node, pkt.active.entries, pkt.cursor);
  if (auto next = greedy_next_hop(node, pkt.destination, pkt.destination_location,
                                  pkt.active.entries, pkt.cursor, now, params, excluded,
                                  pkt.prev_hop)) {
    DataAction act;
    act.kind = DataActionKind::Forward;
    act.next = *next;
    act.updated = std::move(pkt);
    return act;
  }

  for (std::size_t alt_index : alternative_order(pkt.alternatives)) {
    const PathRecord& alt = pkt.alternatives[alt_index];
    const int cursor = path_position(node, alt.entries, 0);
    // greedy_next_hop includes the UAV-bridge entry: a neighboring UAV
    // listed on the alternative qualifies even without progress
    std::optional<NodeId> next =
        greedy_next_hop(node, pkt.destination, pkt.destination_location, alt.entries, cursor,
                        now, params, excluded, pkt.prev_hop);
    if (next) {
      PathRecord chosen = alt;
      DataAction act;
      act.kind = DataActionKind::SwitchPath;
      act.next = *next;
      act.updated = std::move(pkt);
      act.updated.active = std::move(chosen);
      act.updated.cursor = cursor;
      act.updated.alternatives.erase(act.updated.alternatives.begin() +
                                     static_cast<std::ptrdiff_t>(alt_index));
      return act;
    }
  }

  DataAction act;
  act.kind = DataActionKind::EmitRerr;
  act.rerr = build_rerr(node, pkt, map);
  act.updated = std::move(pkt);
  return act;
}

}  // namespace uvr
