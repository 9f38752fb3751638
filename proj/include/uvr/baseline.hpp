#pragma once

#include <vector>

#include "uvr/packets.hpp"
#include "uvr/types.hpp"

namespace uvr {

// Route state for the comparison protocol: a plain relay-id chain from the
// first RREQ copy that reached the destination. No densities, no UAVs, no
// alternative paths; any break sends the packet holder's report back to the
// source, which rediscovers from scratch.
struct BaselineRoute {
  std::uint32_t flow{0};
  std::vector<NodeId> nodes;  // source .. destination
  SimTime established{0};

  bool valid() const { return nodes.size() >= 2; }
};

inline BaseRrepPacket make_base_rrep(const BaseRreqPacket& rreq, NodeId destination) {
  BaseRrepPacket rrep;
  rrep.id = rreq.id;
  rrep.route = rreq.path;
  rrep.route.push_back(destination);
  rrep.index = static_cast<int>(rrep.route.size()) - 1;
  return rrep;
}

// The recorded relay after `index`, or 0 at the route's end.
inline NodeId base_next_relay(const std::vector<NodeId>& route, int index) {
  const std::size_t next = static_cast<std::size_t>(index) + 1;
  return next < route.size() ? route[next] : 0;
}

// The recorded relay before `index`, or 0 at the source.
inline NodeId base_prev_relay(const std::vector<NodeId>& route, int index) {
  return index > 0 ? route[static_cast<std::size_t>(index) - 1] : 0;
}

}  // namespace uvr
