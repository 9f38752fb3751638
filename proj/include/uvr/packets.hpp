#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uvr/geometry.hpp"
#include "uvr/radio.hpp"
#include "uvr/types.hpp"

namespace uvr {

// Discovery identifier: (originating node, per-node sequence number).
struct RreqId {
  NodeId source{0};
  std::uint32_t seq{0};

  std::uint64_t key() const { return (static_cast<std::uint64_t>(source) << 32) | seq; }
  bool operator==(const RreqId&) const = default;
  std::string str() const { return std::to_string(source) + ":" + std::to_string(seq); }
};

// One hop record in a discovered path: either a zone with its vehicle
// density, or a bare UAV id.
struct TransitEntry {
  enum class Kind { Zone, Uav };
  Kind kind{Kind::Zone};
  ZoneId zone{0};
  int density{0};
  NodeId uav{0};

  static TransitEntry zone_entry(ZoneId z, int d) { return {Kind::Zone, z, d, 0}; }
  static TransitEntry uav_entry(NodeId id) { return {Kind::Uav, 0, 0, id}; }
  bool is_zone() const { return kind == Kind::Zone; }
  bool operator==(const TransitEntry&) const = default;
};

// A discovered path: the transit list plus its accumulated delay and
// vehicle count, with scoring results cached after selection.
struct PathRecord {
  std::vector<TransitEntry> entries;
  int nb_vehicles{0};
  SimTime delay{0};

  // derived by the scoring pass
  double average{0.0};
  double s_deviation{0.0};
  double score{0.0};

  int zone_count() const {
    int n = 0;
    for (const auto& e : entries) n += e.is_zone() ? 1 : 0;
    return n;
  }
  int uav_hops() const { return static_cast<int>(entries.size()) - zone_count(); }

  bool contains_zone(ZoneId z) const {
    for (const auto& e : entries)
      if (e.is_zone() && e.zone == z) return true;
    return false;
  }
  bool contains_uav(NodeId id) const {
    for (const auto& e : entries)
      if (!e.is_zone() && e.uav == id) return true;
    return false;
  }
  int density_sum() const {
    int n = 0;
    for (const auto& e : entries) n += e.is_zone() ? e.density : 0;
    return n;
  }
  bool same_route(const PathRecord& other) const { return entries == other.entries; }
};

struct RreqPacket {
  RreqId id;
  NodeId source{0};
  NodeId destination{0};
  SimTime delay{0};
  int nb_vehicles{0};
  SimTime expiry{0};  // absolute expiry time
  int max_hops{0};
  int hop_count{0};
  std::vector<TransitEntry> transited;

  PathRecord to_path() const {
    PathRecord p;
    p.entries = transited;
    p.nb_vehicles = nb_vehicles;
    p.delay = delay;
    return p;
  }
};

struct RrepPacket {
  RreqId id;
  NodeId source{0};       // the RREP's final target (discovery originator)
  NodeId destination{0};  // the replying node
  Vec2 destination_location;
  PathRecord selected;
  std::vector<PathRecord> discovered;

  // transport state for the greedy trip back to the source
  std::vector<TransitEntry> return_entries;  // selected path reversed
  int cursor{0};
  Vec2 source_location;  // center of the source's discovery-time zone
  NodeId prev_hop{0};
  int hops{0};
};

struct DataPacket {
  std::uint32_t flow{0};
  std::uint32_t seq{0};
  NodeId source{0};
  NodeId destination{0};
  Vec2 destination_location;
  PathRecord active;
  std::vector<PathRecord> alternatives;
  int cursor{0};  // index into active.entries of the latest matched entry
  int payload_bytes{1024};
  SimTime origination{0};
  int hops{0};
  int try_index{0};   // 0 for the first send, +1 per source re-send
  NodeId prev_hop{0};

  std::string pkt_id() const { return std::to_string(flow) + ":" + std::to_string(seq); }
};

struct RerrPacket {
  std::uint32_t flow{0};
  std::uint32_t seq{0};  // the data packet that could not be forwarded
  ZoneId broken_zone{0};
  NodeId reporter{0};
  NodeId source{0};
  std::vector<TransitEntry> return_entries;  // traversed prefix, reversed
  int cursor{0};
  Vec2 source_location;
  NodeId prev_hop{0};
  int hops{0};
};

struct HelloPacket {
  NodeId sender{0};
  NodeKind kind{NodeKind::Vehicle};
  Point3 pos;
  ZoneId zone{0};
  SimTime sent{0};
};

// Baseline protocol packets: shortest-hop reactive discovery over node ids.
struct BaseRreqPacket {
  RreqId id;
  NodeId source{0};
  NodeId destination{0};
  SimTime expiry{0};
  int max_hops{0};
  std::vector<NodeId> path;  // relay ids, source first
};

struct BaseRrepPacket {
  RreqId id;
  std::vector<NodeId> route;  // source .. destination
  int index{0};               // current holder's position in route
};

struct BaseDataPacket {
  std::uint32_t flow{0};
  std::uint32_t seq{0};
  std::vector<NodeId> route;
  int index{0};
  SimTime origination{0};
  int hops{0};
  int try_index{0};

  std::string pkt_id() const { return std::to_string(flow) + ":" + std::to_string(seq); }
};

struct BaseNotifyPacket {
  std::uint32_t flow{0};
  std::uint32_t seq{0};
  std::vector<NodeId> route;
  int index{0};  // current holder's position; travels toward route[0]
};

}  // namespace uvr
