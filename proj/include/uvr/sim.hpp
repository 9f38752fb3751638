#pragma once

#include <algorithm>
#include <cstdio>
#include <deque>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "uvr/baseline.hpp"
#include "uvr/config.hpp"
#include "uvr/event_log.hpp"
#include "uvr/metrics.hpp"
#include "uvr/mobility.hpp"
#include "uvr/packets.hpp"
#include "uvr/protocol.hpp"
#include "uvr/radio.hpp"
#include "uvr/road_map.hpp"
#include "uvr/scoring.hpp"
#include "uvr/trace.hpp"

namespace uvr {

struct RunResult {
  std::string log;
  MetricsReport report;
};

// Deterministic discrete-event simulator for one scenario. Instances share
// nothing mutable, so independent runs may execute concurrently.
class Simulator {
 public:
  struct VehiclePlacement {
    SegmentId segment{1};
    double offset{0.0};
    int direction{+1};
    double speed{0.0};
  };

  // Test hooks: explicit vehicle placements and explicit flow endpoints
  // replace the seeded random setup when provided.
  struct Overrides {
    std::vector<VehiclePlacement> vehicles;
    std::vector<std::pair<NodeId, NodeId>> flows;
  };

  explicit Simulator(const ScenarioConfig& cfg, Overrides overrides = {})
      : cfg_(cfg),
        overrides_(std::move(overrides)),
        map_(RoadMap::build_grid(cfg.rows, cfg.cols, cfg.block_length_m, cfg.zone_size_m)) {
    cfg_.validate();
    link_.range = cfg_.range_m;
    link_.uav_range = cfg_.uav_range_m;
    link_.per_hop_latency = cfg_.per_hop_latency();
    link_.obstacle_rule = cfg_.obstacle_rule;
    link_.loss_probability = cfg_.loss_probability;

    params_.per_hop_delay = cfg_.per_hop_latency() + cfg_.processing_delay();
    params_.rreq_lifetime = us_from_s(cfg_.rreq_lifetime_s);
    params_.rreq_max_hops = cfg_.rreq_max_hops;
    params_.collection_window = us_from_s(cfg_.collection_window_ms * 1e-3);
    params_.discovery_timeout = us_from_s(cfg_.discovery_timeout_s);
    params_.retry_budget = cfg_.retry_budget;
    params_.neighbor_staleness = cfg_.neighbor_staleness();
    params_.relay_in_listed_zone = cfg_.relay_in_listed_zone;
  }

  const RoadMap& map() const { return map_; }

  RunResult run() {
    setup();
    const SimTime duration = cfg_.duration();
    while (!events_.empty()) {
      const Event ev = events_.top();
      if (ev.t > duration) break;
      events_.pop();
      now_ = ev.t;
      std::visit([this](const auto& payload) { handle(payload); }, ev.payload);
    }
    now_ = duration;
    finish();

    RunResult result;
    result.report = report_;
    result.log = log_.take();

    // Run audits: packet conservation and log/counter agreement.
    if (result.report.sent !=
        result.report.delivered + result.report.dropped + result.report.expired)
      throw std::logic_error("packet conservation violated");
    if (compute_metrics(result.log) != result.report)
      throw std::logic_error("event log disagrees with in-run counters");
    return result;
  }

 private:
  // ---- events ----------------------------------------------------------
  struct EvMobility {};
  struct EvBeacon {};
  struct EvFlowSend {
    std::uint32_t flow;
  };
  struct EvDestTimer {
    std::uint64_t rreq_key;
  };
  struct EvDiscoveryTimeout {
    std::uint32_t flow;
    std::uint32_t attempt;
  };
  using Packet = std::variant<HelloPacket, RreqPacket, RrepPacket, DataPacket, RerrPacket,
                              BaseRreqPacket, BaseRrepPacket, BaseDataPacket, BaseNotifyPacket>;
  struct EvArrival {
    NodeId receiver;
    Packet pkt;
  };
  struct EvRreqRelay {
    NodeId node;
    RreqPacket pkt;
  };
  struct EvForwardData {
    NodeId node;
    DataPacket pkt;
  };
  struct EvForwardRrep {
    NodeId node;
    RrepPacket pkt;
  };
  struct EvForwardRerr {
    NodeId node;
    RerrPacket pkt;
  };
  struct EvBaseRreqRelay {
    NodeId node;
    BaseRreqPacket pkt;
  };
  struct EvForwardBaseRrep {
    NodeId node;
    BaseRrepPacket pkt;
  };
  struct EvForwardBaseData {
    NodeId node;
    BaseDataPacket pkt;
  };
  struct EvForwardBaseNotify {
    NodeId node;
    BaseNotifyPacket pkt;
  };
  using Payload =
      std::variant<EvMobility, EvBeacon, EvFlowSend, EvDestTimer, EvDiscoveryTimeout, EvArrival,
                   EvRreqRelay, EvForwardData, EvForwardRrep, EvForwardRerr, EvBaseRreqRelay,
                   EvForwardBaseRrep, EvForwardBaseData, EvForwardBaseNotify>;

  // Mobility advances before beacons, and both before protocol work, when
  // several events share an instant; insertion order breaks the rest.
  struct Event {
    SimTime t;
    int tier;
    std::uint64_t seq;
    Payload payload;
  };
  struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
      if (a.t != b.t) return a.t > b.t;
      if (a.tier != b.tier) return a.tier > b.tier;
      return a.seq > b.seq;
    }
  };

  void schedule(SimTime t, Payload payload, int tier = 2) {
    events_.push(Event{t, tier, next_event_seq_++, std::move(payload)});
  }

  // ---- per-node and per-flow runtime state ------------------------------
  struct NodeRt {
    NodeState state;
    std::unordered_set<std::uint64_t> seen_rreq;
    VehicleMobilityState vehicle;
    UavMobilityState uav;
    Rng rng{0};
  };

  struct PendingPacket {
    std::uint32_t seq;
    SimTime origination;
    int tries{0};
  };

  struct FlowRt {
    std::uint32_t id{0};
    NodeId src{0};
    NodeId dst{0};
    SimTime start{0};
    std::uint32_t next_seq{0};
    bool has_route{false};
    PathRecord active;
    std::vector<PathRecord> alternatives;
    Vec2 dst_location;
    BaselineRoute base_route;
    std::deque<PendingPacket> queue;
    bool discovering{false};
    std::uint32_t attempt{0};
    RreqId current_rreq;
    int rerr_count{0};
  };

  struct Collection {
    NodeId dest{0};
    std::vector<PathRecord> candidates;
    bool closed{false};
  };

  // ---- setup ------------------------------------------------------------
  void setup() {
    const bool trace_mode = cfg_.mobility == "trace";
    if (trace_mode) trace_ = Trace::load(cfg_.trace_file);

    Rng placement = Rng::derive(cfg_.seed, 1);
    Rng uav_setup = Rng::derive(cfg_.seed, 2);
    Rng flow_rng = Rng::derive(cfg_.seed, 3);
    loss_rng_ = Rng::derive(cfg_.seed, 4);

    std::vector<NodeId> vehicle_ids;
    if (trace_mode) {
      for (NodeId id : trace_->node_ids()) {
        NodeRt n;
        n.state.id = id;
        n.state.kind = trace_->is_uav(id) ? NodeKind::Uav : NodeKind::Vehicle;
        nodes_.emplace(id, std::move(n));
        if (nodes_.at(id).state.kind == NodeKind::Vehicle) vehicle_ids.push_back(id);
      }
      refresh_trace_positions(0);
    } else {
      const int vehicle_count = overrides_.vehicles.empty()
                                    ? cfg_.vehicles
                                    : static_cast<int>(overrides_.vehicles.size());
      // total road length for length-weighted segment placement
      double total_len = 0.0;
      for (const Segment& s : map_.segments()) total_len += s.length;

      for (int i = 0; i < vehicle_count; ++i) {
        const NodeId id = static_cast<NodeId>(i + 1);
        NodeRt n;
        n.state.id = id;
        n.state.kind = NodeKind::Vehicle;
        n.rng = Rng::derive(cfg_.seed, 0x1000 + id);
        VehicleMobilityState vs;
        vs.node = id;
        if (!overrides_.vehicles.empty()) {
          const VehiclePlacement& p = overrides_.vehicles[static_cast<std::size_t>(i)];
          vs.segment = p.segment;
          vs.offset = p.offset;
          vs.direction = p.direction;
          vs.speed = p.speed;
        } else {
          double pick = placement.uniform(0.0, total_len);
          SegmentId seg = map_.segments().back().id;
          for (const Segment& s : map_.segments()) {
            if (pick < s.length) {
              seg = s.id;
              break;
            }
            pick -= s.length;
          }
          vs.segment = seg;
          vs.offset = placement.uniform(0.0, map_.segment(seg).length);
          vs.direction = placement.chance(0.5) ? +1 : -1;
          vs.speed = placement.uniform(0.0, cfg_.vehicle_max_speed());
        }
        n.vehicle = vs;
        apply_vehicle_state(n);
        nodes_.emplace(id, std::move(n));
        vehicle_ids.push_back(id);
      }

      const auto blocks = assign_patrol_blocks(map_, cfg_.uavs);
      std::map<int, int> per_block;
      for (int b : blocks) per_block[b] += 1;
      std::map<int, std::vector<double>> block_offsets;
      std::map<int, int> placed;
      std::map<std::pair<int, int>, double> pair_speed;  // (block, pair) -> speed
      for (int i = 0; i < cfg_.uavs; ++i) {
        const NodeId id = static_cast<NodeId>(vehicle_count + i + 1);
        NodeRt n;
        n.state.id = id;
        n.state.kind = NodeKind::Uav;
        const Block& blk = map_.blocks()[static_cast<std::size_t>(blocks[i])];
        UavMobilityState us;
        us.node = id;
        us.patrol_area.assign(blk.edges.begin(), blk.edges.end());
        us.bbox_lo = blk.lo;
        us.bbox_hi = blk.hi;
        us.altitude = cfg_.uav_altitude_m;
        const int k = placed[blocks[i]]++;
        auto& offsets = block_offsets[blocks[i]];
        if (offsets.empty())
          offsets = uav_loop_offsets(patrol_perimeter(us), per_block[blocks[i]]);
        us.loop_pos = offsets[static_cast<std::size_t>(k)];
        // members of a train fly at one speed so their spacing holds
        auto [sp_it, drawn] = pair_speed.try_emplace({blocks[i], 0}, 0.0);
        if (drawn) sp_it->second = uav_setup.uniform(cfg_.uav_speed_min(), cfg_.uav_speed_max());
        us.speed = sp_it->second;
        n.uav = us;
        apply_uav_state(n);
        nodes_.emplace(id, std::move(n));
      }
    }

    // flows: seeded sender sample and destination draw over vehicles
    std::vector<std::pair<NodeId, NodeId>> endpoints = overrides_.flows;
    if (endpoints.empty() && cfg_.senders > 0) {
      std::vector<NodeId> pool = vehicle_ids;
      for (std::size_t i = pool.size(); i > 1; --i)
        std::swap(pool[i - 1], pool[flow_rng.below(i)]);
      const int senders = std::min<int>(cfg_.senders, static_cast<int>(pool.size()));
      for (int i = 0; i < senders; ++i) {
        const NodeId src = pool[static_cast<std::size_t>(i)];
        NodeId dst = src;
        while (dst == src && vehicle_ids.size() > 1)
          dst = vehicle_ids[flow_rng.below(vehicle_ids.size())];
        endpoints.emplace_back(src, dst);
      }
    }
    for (std::size_t i = 0; i < endpoints.size(); ++i) {
      FlowRt f;
      f.id = static_cast<std::uint32_t>(i);
      f.src = endpoints[i].first;
      f.dst = endpoints[i].second;
      // flows start staggered 10 ms apart to spread the initial discoveries
      f.start = us_from_s(cfg_.flow_start_s) + static_cast<SimTime>(i) * 10'000;
      flows_.push_back(std::move(f));
      if (flows_.back().start <= cfg_.duration())
        schedule(flows_.back().start, EvFlowSend{flows_.back().id});
    }

    if (!cfg_.trace_dump_file.empty()) {
      dump_trace_.emplace();
      record_trace_samples(0);
    }

    schedule(0, EvBeacon{}, 1);
    if (cfg_.mobility_step() <= cfg_.duration()) schedule(cfg_.mobility_step(), EvMobility{}, 0);
  }

  void apply_vehicle_state(NodeRt& n) {
    const VehicleMobilityState& vs = n.vehicle;
    const Vec2 p = map_.point_on_segment(vs.segment, vs.offset);
    n.state.pos = {p.x, p.y, 0.0};
    n.state.segment = vs.segment;
    n.state.zone = map_.zone_at(vs.segment, vs.offset);
  }

  void apply_uav_state(NodeRt& n) {
    const Vec2 p = uav_position(n.uav);
    n.state.pos = {p.x, p.y, n.uav.altitude};
    n.state.segment = 0;
    n.state.zone = 0;
  }

  void refresh_trace_positions(SimTime t) {
    const double ts = s_from_us(t);
    for (auto& [id, n] : nodes_) {
      const Point3 p = trace_->position_at(id, ts);
      n.state.pos = p;
      if (n.state.kind == NodeKind::Vehicle) {
        // re-derive the road assignment from the traced position
        SegmentId best_seg = 0;
        double best_dist = 0.0, best_offset = 0.0;
        for (const Segment& s : map_.segments()) {
          const auto pr = project_onto_segment(p.ground(), map_.intersections()[s.endpoint_a],
                                               map_.intersections()[s.endpoint_b]);
          if (best_seg == 0 || pr.distance < best_dist) {
            best_seg = s.id;
            best_dist = pr.distance;
            best_offset = pr.offset;
          }
        }
        if (best_dist > kDefaultSnapTolerance)
          throw TraceError("traced vehicle " + std::to_string(id) + " is off-road at t=" +
                           std::to_string(ts));
        n.state.segment = best_seg;
        n.state.zone = map_.zone_at(best_seg, best_offset);
      }
    }
  }

  void record_trace_samples(SimTime t) {
    const double ts = s_from_us(t);
    for (const auto& [id, n] : nodes_) dump_trace_->append(id, ts, n.state.pos);
  }

  // ---- logging and counters ---------------------------------------------
  void log_tx(NodeId node, const char* pkind, const std::string& id,
              std::string_view detail = {}) {
    if (pkind == std::string_view("rreq")) ++report_.rreq_tx;
    else if (pkind == std::string_view("rrep")) ++report_.rrep_tx;
    else if (pkind == std::string_view("rerr")) ++report_.rerr_tx;
    else if (pkind == std::string_view("hello")) ++report_.hello_tx;
    log_.append(now_, "tx", node, pkind, id, detail);
  }

  std::uint64_t packet_key(std::uint32_t flow, std::uint32_t seq) const {
    return (static_cast<std::uint64_t>(flow) << 32) | seq;
  }

  void count_data_tx(std::uint32_t flow, std::uint32_t seq) {
    const auto it = outstanding_.find(packet_key(flow, seq));
    if (it != outstanding_.end()) it->second.total_tx += 1;
  }

  void resolve_drop(NodeId at, std::uint32_t flow, std::uint32_t seq, const char* reason) {
    const auto it = outstanding_.find(packet_key(flow, seq));
    if (it == outstanding_.end()) return;
    outstanding_.erase(it);
    ++report_.dropped;
    log_.append(now_, "drop", at, "data", std::to_string(flow) + ":" + std::to_string(seq),
                std::string("reason=") + reason);
  }

  // ---- periodic handlers --------------------------------------------------
  void handle(const EvMobility&) {
    if (cfg_.mobility == "trace") {
      refresh_trace_positions(now_);
    } else {
      const double dt = s_from_us(cfg_.mobility_step());
      for (auto& [id, n] : nodes_) {
        if (n.state.kind == NodeKind::Vehicle) {
          n.vehicle = step_vehicle(map_, n.vehicle, dt, n.rng, cfg_.vehicle_max_speed(),
                                   cfg_.uturn_probability);
          apply_vehicle_state(n);
        } else {
          n.uav = step_uav(n.uav, dt);
          apply_uav_state(n);
        }
      }
    }
    if (dump_trace_) record_trace_samples(now_);
    const SimTime next = now_ + cfg_.mobility_step();
    if (next <= cfg_.duration()) schedule(next, EvMobility{}, 0);
  }

  void handle(const EvBeacon&) {
    for (auto& [id, n] : nodes_) {
      prune_neighbors(n.state, now_, params_.neighbor_staleness);
      HelloPacket hello{n.state.id, n.state.kind, n.state.pos, n.state.zone, now_};
      log_tx(n.state.id, "hello", "-");
      broadcast(n.state.id, Packet{hello});
    }
    const SimTime next = now_ + cfg_.hello_interval();
    if (next <= cfg_.duration()) schedule(next, EvBeacon{}, 1);
  }

  // ---- radio ------------------------------------------------------------
  bool loss_roll() {
    return link_.loss_probability > 0.0 && loss_rng_.chance(link_.loss_probability);
  }

  void broadcast(NodeId sender, const Packet& pkt) {
    const NodeRt& s = nodes_.at(sender);
    for (auto& [id, n] : nodes_) {
      if (id == sender) continue;
      if (!in_range(s.state, n.state, map_, link_)) continue;
      if (loss_roll()) continue;
      schedule(now_ + link_.per_hop_latency, EvArrival{id, pkt});
    }
  }

  // Unicast feasibility check: the out-of-range case surfaces to the
  // protocol layer as a link-break signal before anything is transmitted.
  bool reachable(NodeId sender, NodeId target) const {
    const auto it = nodes_.find(target);
    if (it == nodes_.end()) return false;
    return in_range(nodes_.at(sender).state, it->second.state, map_, link_);
  }

  void transmit(NodeId target, const Packet& pkt) {
    if (!loss_roll()) schedule(now_ + link_.per_hop_latency, EvArrival{target, pkt});
  }

  // ---- flows ---------------------------------------------------------------
  void handle(const EvFlowSend& ev) {
    FlowRt& f = flows_[ev.flow];
    const std::uint32_t seq = f.next_seq++;
    const SimTime orig = now_;
    ++report_.sent;
    outstanding_.emplace(packet_key(f.id, seq), Outstanding{orig, 0});
    log_.append(now_, "send", f.src, "data", std::to_string(f.id) + ":" + std::to_string(seq),
                "orig_us=" + std::to_string(orig));

    if (f.has_route) {
      send_data_now(f, {seq, orig, 0});
    } else {
      f.queue.push_back({seq, orig, 0});
      if (!f.discovering) start_discovery(f);
    }

    const SimTime next = now_ + us_from_s(1.0 / cfg_.rate_pps);
    if (next <= cfg_.duration()) schedule(next, EvFlowSend{f.id});
  }

  void start_discovery(FlowRt& f) {
    f.discovering = true;
    f.attempt += 1;
    NodeRt& src = nodes_.at(f.src);
    const std::uint32_t seq = rreq_seq_[f.src]++;
    if (cfg_.protocol == "baseline") {
      BaseRreqPacket rreq;
      rreq.id = {f.src, seq};
      rreq.source = f.src;
      rreq.destination = f.dst;
      rreq.expiry = now_ + params_.rreq_lifetime;
      rreq.max_hops = params_.rreq_max_hops;
      rreq.path.push_back(f.src);
      f.current_rreq = rreq.id;
      src.seen_rreq.insert(rreq.id.key());
      log_tx(f.src, "rreq", rreq.id.str());
      broadcast(f.src, Packet{rreq});
    } else {
      RreqPacket rreq = make_rreq(src.state, f.dst, seq, now_, params_);
      f.current_rreq = rreq.id;
      src.seen_rreq.insert(rreq.id.key());
      rreq_flow_[rreq.id.key()] = f.id;
      log_tx(f.src, "rreq", rreq.id.str());
      broadcast(f.src, Packet{rreq});
    }
    schedule(now_ + params_.discovery_timeout, EvDiscoveryTimeout{f.id, f.attempt});
  }

  void handle(const EvDiscoveryTimeout& ev) {
    FlowRt& f = flows_[ev.flow];
    if (!f.discovering || f.attempt != ev.attempt || f.has_route) return;
    f.discovering = false;
    while (!f.queue.empty()) {
      resolve_drop(f.src, f.id, f.queue.front().seq, "no_route");
      f.queue.pop_front();
    }
  }

  void send_data_now(FlowRt& f, const PendingPacket& pending) {
    if (cfg_.protocol == "baseline") {
      BaseDataPacket pkt;
      pkt.flow = f.id;
      pkt.seq = pending.seq;
      pkt.route = f.base_route.nodes;
      pkt.index = 0;
      pkt.origination = pending.origination;
      pkt.try_index = pending.tries;
      schedule(now_, EvForwardBaseData{f.src, std::move(pkt)});
    } else {
      DataPacket pkt;
      pkt.flow = f.id;
      pkt.seq = pending.seq;
      pkt.source = f.src;
      pkt.destination = f.dst;
      pkt.destination_location = f.dst_location;
      pkt.active = f.active;
      pkt.alternatives = f.alternatives;
      pkt.payload_bytes = cfg_.packet_size_bytes;
      pkt.origination = pending.origination;
      pkt.try_index = pending.tries;
      schedule(now_, EvForwardData{f.src, std::move(pkt)});
    }
  }

  void flush_flow_queue(FlowRt& f) {
    while (!f.queue.empty()) {
      send_data_now(f, f.queue.front());
      f.queue.pop_front();
    }
  }

  // Route-failure report reached the source (or originated there). Each
  // recovery episode tolerates `retry_budget` rediscoveries; one more RERR
  // abandons the episode: the outstanding backlog is dropped and the flow
  // starts over (fresh budget) with its next generated packet.
  void handle_rerr_at_source(std::uint32_t flow, std::uint32_t seq) {
    if (flow >= flows_.size()) return;  // unknown flow
    FlowRt& f = flows_[flow];
    if (!outstanding_.count(packet_key(flow, seq))) return;  // unknown or finished packet
    f.rerr_count += 1;
    f.has_route = false;
    // the comparison protocol rediscovers on every break, without a budget
    const bool budgeted = cfg_.protocol != "baseline";
    if (budgeted && f.rerr_count > params_.retry_budget) {
      f.rerr_count = 0;
      f.discovering = false;
      log_.append(now_, "abandon", f.src, "flow", std::to_string(f.id));
      while (!f.queue.empty()) {
        resolve_drop(f.src, f.id, f.queue.front().seq, "abandoned");
        f.queue.pop_front();
      }
      resolve_drop(f.src, f.id, seq, "abandoned");
      return;
    }
    bool queued = false;
    for (const auto& p : f.queue)
      if (p.seq == seq) {
        queued = true;
        break;
      }
    if (!queued) {
      const SimTime orig = outstanding_.at(packet_key(flow, seq)).origination;
      f.queue.push_back({seq, orig, f.rerr_count});
    }
    if (!f.discovering) start_discovery(f);
  }

  // ---- arrivals -----------------------------------------------------------
  void handle(const EvArrival& ev) {
    const auto node_it = nodes_.find(ev.receiver);
    if (node_it == nodes_.end()) return;
    std::visit([&](const auto& pkt) { receive(node_it->second, pkt); }, ev.pkt);
  }

  void receive(NodeRt& n, const HelloPacket& hello) {
    upsert_neighbor(n.state, hello.sender,
                    NeighborEntry{hello.sent, hello.pos, hello.kind, hello.zone});
  }

  void receive(NodeRt& n, const RreqPacket& rreq) {
    const RreqAction action = handle_rreq(n.state, n.seen_rreq, rreq, now_, params_);
    switch (action.kind) {
      case RreqActionKind::Drop:
        break;
      case RreqActionKind::DeliverToDestination:
        collect_at_destination(n, rreq);
        break;
      case RreqActionKind::Rebroadcast:
        schedule(now_ + cfg_.processing_delay(), EvRreqRelay{n.state.id, action.updated});
        break;
    }
  }

  void collect_at_destination(NodeRt& n, const RreqPacket& rreq) {
    auto [it, fresh] = collections_.try_emplace(rreq.id.key());
    Collection& coll = it->second;
    if (coll.closed) return;
    if (fresh) {
      coll.dest = n.state.id;
      schedule(now_ + params_.collection_window, EvDestTimer{rreq.id.key()});
    }
    coll.candidates.push_back(rreq.to_path());
    log_.append(now_, "dest_rx", n.state.id, "rreq", rreq.id.str(),
                "nb=" + std::to_string(rreq.nb_vehicles) +
                    " delay_us=" + std::to_string(rreq.delay));
  }

  void handle(const EvRreqRelay& ev) {
    if (now_ > ev.pkt.expiry) return;  // expired while queued for processing
    log_tx(ev.node, "rreq", ev.pkt.id.str());
    broadcast(ev.node, Packet{ev.pkt});
  }

  void handle(const EvDestTimer& ev) {
    Collection& coll = collections_.at(ev.rreq_key);
    coll.closed = true;
    if (coll.candidates.empty()) return;
    NodeRt& dest = nodes_.at(coll.dest);
    std::vector<PathRecord> candidates = coll.candidates;
    const std::size_t best = select_path(candidates, params_.score_delay_floor);
    char detail[96];
    std::snprintf(detail, sizeof(detail), "paths=%zu score=%.6g uavs=%d", candidates.size(),
                  candidates[best].score, candidates[best].uav_hops());
    const RreqId id{static_cast<NodeId>(ev.rreq_key >> 32),
                    static_cast<std::uint32_t>(ev.rreq_key & 0xffffffffu)};
    log_.append(now_, "select", dest.state.id, "rreq", id.str(), detail);
    RrepPacket rrep = build_rrep(dest.state, id, id.source, std::move(candidates), best, map_);
    rrep.cursor = path_position(dest.state, rrep.return_entries, 0);
    forward_rrep(dest, std::move(rrep));
  }

  void forward_rrep(NodeRt& n, RrepPacket rrep) {
    if (rrep.hops >= params_.forward_hop_limit) return;
    std::unordered_set<NodeId> excluded;
    while (true) {
      const auto next = greedy_next_hop(n.state, rrep.source, rrep.source_location,
                                        rrep.return_entries, rrep.cursor, now_, params_,
                                        &excluded, rrep.prev_hop);
      if (!next) return;  // reply lost; the source's discovery timer recovers
      if (reachable(n.state.id, *next)) {
        RrepPacket out = rrep;
        out.prev_hop = n.state.id;
        out.hops += 1;
        log_tx(n.state.id, "rrep", out.id.str());
        transmit(*next, Packet{std::move(out)});
        return;
      }
      excluded.insert(*next);  // stale table entry; try another candidate
    }
  }

  void receive(NodeRt& n, const RrepPacket& rrep) {
    if (n.state.id == rrep.source) {
      install_route(n, rrep);
      return;
    }
    RrepPacket pkt = rrep;
    pkt.cursor = path_position(n.state, pkt.return_entries, pkt.cursor);
    schedule(now_ + cfg_.processing_delay(), EvForwardRrep{n.state.id, std::move(pkt)});
  }

  void handle(const EvForwardRrep& ev) { forward_rrep(nodes_.at(ev.node), ev.pkt); }

  void install_route(NodeRt& n, const RrepPacket& rrep) {
    const auto flow_it = rreq_flow_.find(rrep.id.key());
    if (flow_it == rreq_flow_.end()) return;
    FlowRt& f = flows_[flow_it->second];
    if (f.src != n.state.id) return;
    f.rerr_count = 0;  // successful rediscovery closes the recovery episode
    f.has_route = true;
    f.discovering = false;
    f.active = rrep.selected;
    f.alternatives.clear();
    bool selected_removed = false;
    for (const PathRecord& p : rrep.discovered) {
      if (!selected_removed && p.same_route(rrep.selected) && p.delay == rrep.selected.delay) {
        selected_removed = true;
        continue;
      }
      f.alternatives.push_back(p);
    }
    f.dst_location = rrep.destination_location;
    log_.append(now_, "install", f.src, "rrep", rrep.id.str(),
                "alts=" + std::to_string(f.alternatives.size()) +
                    " uavs=" + std::to_string(f.active.uav_hops()));
    flush_flow_queue(f);
  }

  // ---- data plane ----------------------------------------------------------
  void receive(NodeRt& n, const DataPacket& pkt) {
    if (n.state.id == pkt.destination) {
      deliver_data(pkt);
      return;
    }
    schedule(now_ + cfg_.processing_delay(), EvForwardData{n.state.id, pkt});
  }

  void deliver_data(const DataPacket& pkt) {
    const auto it = outstanding_.find(packet_key(pkt.flow, pkt.seq));
    if (it == outstanding_.end()) return;  // stale duplicate
    const int total_tx = it->second.total_tx;
    outstanding_.erase(it);
    ++report_.delivered;
    report_.total_hops += pkt.hops;
    report_.total_delay_us += now_ - pkt.origination;
    log_.append(now_, "deliver", pkt.destination, "data", pkt.pkt_id(),
                "hops=" + std::to_string(pkt.hops) + " tx=" + std::to_string(total_tx) +
                    " try=" + std::to_string(pkt.try_index) +
                    " orig_us=" + std::to_string(pkt.origination));
  }

  void handle(const EvForwardData& ev) {
    NodeRt& n = nodes_.at(ev.node);
    const DataPacket& pkt = ev.pkt;
    if (pkt.hops >= params_.forward_hop_limit) {
      resolve_drop(n.state.id, pkt.flow, pkt.seq, "ttl");
      return;
    }
    std::unordered_set<NodeId> excluded;
    while (true) {
      DataAction act = forward_data(n.state, pkt, now_, params_, map_, &excluded);
      if (act.kind == DataActionKind::EmitRerr) {
        if (n.state.id == pkt.source) {
          handle_rerr_at_source(pkt.flow, pkt.seq);
        } else {
          forward_rerr(n, std::move(act.rerr));
        }
        return;
      }
      if (!reachable(n.state.id, act.next)) {
        excluded.insert(act.next);  // stale table entry; re-decide without it
        continue;
      }
      if (act.kind == DataActionKind::SwitchPath)
        log_.append(now_, "switch", n.state.id, "data", pkt.pkt_id(),
                    "alts=" + std::to_string(act.updated.alternatives.size()));
      act.updated.hops += 1;
      act.updated.prev_hop = n.state.id;
      count_data_tx(act.updated.flow, act.updated.seq);
      log_tx(n.state.id, "data", act.updated.pkt_id(),
             "try=" + std::to_string(act.updated.try_index));
      transmit(act.next, Packet{std::move(act.updated)});
      return;
    }
  }

  void forward_rerr(NodeRt& n, RerrPacket rerr) {
    if (rerr.hops >= params_.forward_hop_limit) {
      resolve_drop(n.state.id, rerr.flow, rerr.seq, "ttl");
      return;
    }
    rerr.cursor = path_position(n.state, rerr.return_entries, rerr.cursor);
    std::unordered_set<NodeId> excluded;
    while (true) {
      const auto next = greedy_next_hop(n.state, rerr.source, rerr.source_location,
                                        rerr.return_entries, rerr.cursor, now_, params_,
                                        &excluded, rerr.prev_hop);
      if (!next) {
        // total isolation: the error report dies here and so does the packet
        resolve_drop(n.state.id, rerr.flow, rerr.seq, "isolated");
        return;
      }
      if (reachable(n.state.id, *next)) {
        RerrPacket out = rerr;
        out.prev_hop = n.state.id;
        out.hops += 1;
        log_tx(n.state.id, "rerr",
               std::to_string(out.flow) + ":" + std::to_string(out.seq));
        transmit(*next, Packet{std::move(out)});
        return;
      }
      excluded.insert(*next);
    }
  }

  void receive(NodeRt& n, const RerrPacket& rerr) {
    if (n.state.id == rerr.source) {
      handle_rerr_at_source(rerr.flow, rerr.seq);
      return;
    }
    schedule(now_ + cfg_.processing_delay(), EvForwardRerr{n.state.id, rerr});
  }

  void handle(const EvForwardRerr& ev) { forward_rerr(nodes_.at(ev.node), ev.pkt); }

  // ---- baseline protocol ----------------------------------------------------
  void receive(NodeRt& n, const BaseRreqPacket& rreq) {
    if (n.state.kind == NodeKind::Uav) return;  // baseline keeps UAVs out
    if (now_ > rreq.expiry || static_cast<int>(rreq.path.size()) > rreq.max_hops) return;
    if (n.seen_rreq.count(rreq.id.key())) return;
    n.seen_rreq.insert(rreq.id.key());
    if (n.state.id == rreq.destination) {
      // first arrival wins; later copies fall to the seen-set check
      BaseRrepPacket rrep = make_base_rrep(rreq, n.state.id);
      forward_base_rrep(n, std::move(rrep));
      return;
    }
    BaseRreqPacket out = rreq;
    out.path.push_back(n.state.id);
    schedule(now_ + cfg_.processing_delay(), EvBaseRreqRelay{n.state.id, std::move(out)});
  }

  void handle(const EvBaseRreqRelay& ev) {
    if (now_ > ev.pkt.expiry) return;
    log_tx(ev.node, "rreq", ev.pkt.id.str());
    broadcast(ev.node, Packet{ev.pkt});
  }

  void forward_base_rrep(NodeRt& n, BaseRrepPacket rrep) {
    const NodeId prev = base_prev_relay(rrep.route, rrep.index);
    if (prev == 0) return;
    if (!reachable(n.state.id, prev)) return;  // reply lost; discovery times out
    BaseRrepPacket out = rrep;
    out.index -= 1;
    log_tx(n.state.id, "rrep", rrep.id.str());
    transmit(prev, Packet{std::move(out)});
  }

  void receive(NodeRt& n, const BaseRrepPacket& rrep) {
    if (rrep.index == 0) {
      // reached the discovery originator
      for (FlowRt& f : flows_) {
        if (f.src != n.state.id || f.current_rreq.key() != rrep.id.key()) continue;
        f.rerr_count = 0;  // successful rediscovery closes the recovery episode
        f.has_route = true;
        f.discovering = false;
        f.base_route = BaselineRoute{f.id, rrep.route, now_};
        log_.append(now_, "install", f.src, "rrep", rrep.id.str(),
                    "hops=" + std::to_string(rrep.route.size() - 1));
        flush_flow_queue(f);
        return;
      }
      return;
    }
    schedule(now_ + cfg_.processing_delay(), EvForwardBaseRrep{n.state.id, rrep});
  }

  void handle(const EvForwardBaseRrep& ev) {
    forward_base_rrep(nodes_.at(ev.node), ev.pkt);
  }

  void receive(NodeRt& n, const BaseDataPacket& pkt) {
    if (!pkt.route.empty() && n.state.id == pkt.route.back()) {
      const auto it = outstanding_.find(packet_key(pkt.flow, pkt.seq));
      if (it == outstanding_.end()) return;
      const int total_tx = it->second.total_tx;
      outstanding_.erase(it);
      ++report_.delivered;
      report_.total_hops += pkt.hops;
      report_.total_delay_us += now_ - pkt.origination;
      log_.append(now_, "deliver", n.state.id, "data", pkt.pkt_id(),
                  "hops=" + std::to_string(pkt.hops) + " tx=" + std::to_string(total_tx) +
                      " try=" + std::to_string(pkt.try_index) +
                      " orig_us=" + std::to_string(pkt.origination));
      return;
    }
    schedule(now_ + cfg_.processing_delay(), EvForwardBaseData{n.state.id, pkt});
  }

  void handle(const EvForwardBaseData& ev) {
    NodeRt& n = nodes_.at(ev.node);
    const BaseDataPacket& pkt = ev.pkt;
    const NodeId next = base_next_relay(pkt.route, pkt.index);
    if (next != 0 && reachable(n.state.id, next)) {
      BaseDataPacket out = pkt;
      out.index += 1;
      out.hops += 1;
      count_data_tx(out.flow, out.seq);
      log_tx(n.state.id, "data", out.pkt_id(), "try=" + std::to_string(out.try_index));
      transmit(next, Packet{std::move(out)});
      return;
    }
    // link break: report back toward the source; the packet copy is gone
    BaseNotifyPacket notify{pkt.flow, pkt.seq, pkt.route, pkt.index};
    forward_base_notify(n, std::move(notify));
  }

  void forward_base_notify(NodeRt& n, BaseNotifyPacket notify) {
    if (notify.index == 0) {
      handle_rerr_at_source(notify.flow, notify.seq);
      return;
    }
    const NodeId prev = base_prev_relay(notify.route, notify.index);
    if (!reachable(n.state.id, prev)) {
      resolve_drop(n.state.id, notify.flow, notify.seq, "notify_failed");
      return;
    }
    BaseNotifyPacket out = notify;
    out.index -= 1;
    log_tx(n.state.id, "rerr", std::to_string(notify.flow) + ":" + std::to_string(notify.seq));
    transmit(prev, Packet{std::move(out)});
  }

  void receive(NodeRt& n, const BaseNotifyPacket& notify) {
    if (notify.index == 0) {
      handle_rerr_at_source(notify.flow, notify.seq);
      return;
    }
    schedule(now_ + cfg_.processing_delay(), EvForwardBaseNotify{n.state.id, notify});
  }

  void handle(const EvForwardBaseNotify& ev) {
    forward_base_notify(nodes_.at(ev.node), ev.pkt);
  }

  // ---- teardown -------------------------------------------------------------
  void finish() {
    for (const auto& [key, meta] : outstanding_) {
      const auto flow = static_cast<std::uint32_t>(key >> 32);
      const auto seq = static_cast<std::uint32_t>(key & 0xffffffffu);
      ++report_.expired;
      log_.append(now_, "expire", flows_[flow].src, "data",
                  std::to_string(flow) + ":" + std::to_string(seq), {});
    }
    outstanding_.clear();
    if (dump_trace_) dump_trace_->save(cfg_.trace_dump_file);
  }

  // ---- members ---------------------------------------------------------------
  ScenarioConfig cfg_;
  Overrides overrides_;
  RoadMap map_;
  LinkModel link_;
  ProtocolParams params_;
  Rng loss_rng_{0};

  std::map<NodeId, NodeRt> nodes_;
  std::vector<FlowRt> flows_;
  std::unordered_map<NodeId, std::uint32_t> rreq_seq_;
  std::unordered_map<std::uint64_t, std::uint32_t> rreq_flow_;
  std::unordered_map<std::uint64_t, Collection> collections_;
  struct Outstanding {
    SimTime origination{0};
    int total_tx{0};  // data transmissions across all tries
  };
  std::map<std::uint64_t, Outstanding> outstanding_;

  std::priority_queue<Event, std::vector<Event>, EventAfter> events_;
  std::uint64_t next_event_seq_{0};
  SimTime now_{0};
  std::optional<Trace> trace_;
  std::optional<Trace> dump_trace_;
  EventLog log_;
  MetricsReport report_;
};

inline RunResult run_scenario(const ScenarioConfig& cfg) { return Simulator(cfg).run(); }

}  // namespace uvr
