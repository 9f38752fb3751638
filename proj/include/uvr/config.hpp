#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "uvr/types.hpp"

namespace uvr {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Full description of one simulation run. Defaults follow the reference
// urban scenario: a 4x4 km grid with 9 intersections, 300 m radio range,
// 16 UAVs, and 35 constant-rate senders.
struct ScenarioConfig {
  // [map]
  int rows{3};
  int cols{3};
  double block_length_m{2000.0};
  double zone_size_m{300.0};

  // [nodes]
  int vehicles{120};
  int uavs{16};
  double vehicle_max_speed_kmh{60.0};
  double uav_speed_min_kmh{50.0};
  double uav_speed_max_kmh{120.0};
  double uav_altitude_m{100.0};
  double uturn_probability{0.1};

  // [radio]
  double range_m{300.0};
  double uav_range_m{300.0};
  double hello_interval_s{1.0};
  double per_hop_latency_ms{2.0};
  double processing_delay_ms{100.0};
  double loss_probability{0.0};
  int staleness_factor{3};  // staleness bound = factor * hello interval
  bool obstacle_rule{true};

  // [flows]
  int senders{35};
  int packet_size_bytes{1024};
  double rate_pps{1.0};
  double flow_start_s{2.0};
  int retry_budget{2};

  // [protocol]
  std::string protocol{"proposed"};  // proposed | baseline
  double rreq_lifetime_s{3.0};
  int rreq_max_hops{40};
  double collection_window_ms{500.0};
  double discovery_timeout_s{3.0};
  bool relay_in_listed_zone{true};

  // [sim]
  double duration_s{300.0};
  double mobility_step_ms{100.0};
  std::uint64_t seed{1};
  std::string mobility{"builtin"};  // builtin | trace
  std::string trace_file{};
  std::string trace_dump_file{};

  SimTime duration() const { return us_from_s(duration_s); }
  SimTime mobility_step() const { return us_from_s(mobility_step_ms * 1e-3); }
  SimTime hello_interval() const { return us_from_s(hello_interval_s); }
  SimTime per_hop_latency() const { return us_from_s(per_hop_latency_ms * 1e-3); }
  SimTime processing_delay() const { return us_from_s(processing_delay_ms * 1e-3); }
  SimTime neighbor_staleness() const { return staleness_factor * hello_interval(); }
  double vehicle_max_speed() const { return vehicle_max_speed_kmh / 3.6; }
  double uav_speed_min() const { return uav_speed_min_kmh / 3.6; }
  double uav_speed_max() const { return uav_speed_max_kmh / 3.6; }

  void validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError("invalid config: " + msg); };
    if (rows < 2 || cols < 2) fail("map needs rows >= 2 and cols >= 2");
    if (block_length_m <= 0) fail("block_length_m must be positive");
    if (zone_size_m <= 0 || zone_size_m > 300.0) fail("zone_size_m must be in (0, 300]");
    if (vehicles < 0 || uavs < 0) fail("node counts must be non-negative");
    if (vehicle_max_speed_kmh < 0) fail("vehicle_max_speed_kmh must be non-negative");
    if (uav_speed_min_kmh < 50.0 || uav_speed_max_kmh > 120.0 ||
        uav_speed_min_kmh > uav_speed_max_kmh)
      fail("uav speed must lie within [50, 120] km/h");
    if (uav_altitude_m < 0) fail("uav_altitude_m must be non-negative");
    if (uturn_probability < 0 || uturn_probability > 1) fail("uturn_probability must be in [0,1]");
    if (range_m <= 0 || uav_range_m <= 0) fail("radio ranges must be positive");
    if (hello_interval_s <= 0) fail("hello_interval_s must be positive");
    if (per_hop_latency_ms <= 0) fail("per_hop_latency_ms must be positive");
    if (processing_delay_ms < 0) fail("processing_delay_ms must be non-negative");
    if (loss_probability < 0 || loss_probability > 1) fail("loss_probability must be in [0,1]");
    if (staleness_factor < 1) fail("staleness_factor must be at least 1");
    if (senders < 0) fail("senders must be non-negative");
    if (senders > 0 && vehicles < 2 && mobility != "trace")
      fail("flows need at least 2 vehicles");
    if (senders > vehicles && mobility != "trace") fail("more senders than vehicles");
    if (packet_size_bytes <= 0) fail("packet_size_bytes must be positive");
    if (rate_pps <= 0) fail("rate_pps must be positive");
    if (flow_start_s < 0) fail("flow_start_s must be non-negative");
    if (retry_budget < 0) fail("retry_budget must be non-negative");
    if (protocol != "proposed" && protocol != "baseline")
      fail("protocol must be 'proposed' or 'baseline'");
    if (rreq_lifetime_s <= 0) fail("rreq_lifetime_s must be positive");
    if (rreq_max_hops < 1) fail("rreq_max_hops must be at least 1");
    if (collection_window_ms < 0) fail("collection_window_ms must be non-negative");
    if (discovery_timeout_s <= 0) fail("discovery_timeout_s must be positive");
    if (duration_s <= 0) fail("duration_s must be positive");
    if (mobility_step_ms <= 0) fail("mobility_step_ms must be positive");
    if (mobility != "builtin" && mobility != "trace") fail("mobility must be 'builtin' or 'trace'");
    if (mobility == "trace" && trace_file.empty()) fail("trace mobility needs trace_file");
  }

  static ScenarioConfig from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse(in, path);
  }

  static ScenarioConfig parse(std::istream& in, const std::string& name = "<config>") {
    ScenarioConfig cfg;
    std::string line, section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto strip = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return std::string{};
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
      };
      line = strip(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ConfigError(name + ":" + std::to_string(line_no) + ": malformed section header");
        section = strip(line.substr(1, line.size() - 2));
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError(name + ":" + std::to_string(line_no) + ": expected key = value");
      const std::string key = strip(line.substr(0, eq));
      const std::string value = strip(line.substr(eq + 1));
      if (!cfg.apply(section, key, value))
        throw ConfigError(name + ":" + std::to_string(line_no) + ": unknown key '" + section +
                          "." + key + "'");
    }
    cfg.validate();
    return cfg;
  }

  bool apply(const std::string& section, const std::string& key, const std::string& value) {
    const auto as_int = [&] { return std::stoi(value); };
    const auto as_double = [&] { return std::stod(value); };
    const auto as_u64 = [&] { return static_cast<std::uint64_t>(std::stoull(value)); };
    const auto as_bool = [&] {
      if (value == "true" || value == "1" || value == "yes") return true;
      if (value == "false" || value == "0" || value == "no") return false;
      throw ConfigError("boolean key '" + key + "' must be true/false");
    };
    const std::string full = section + "." + key;
    if (full == "map.rows") rows = as_int();
    else if (full == "map.cols") cols = as_int();
    else if (full == "map.block_length_m") block_length_m = as_double();
    else if (full == "map.zone_size_m") zone_size_m = as_double();
    else if (full == "nodes.vehicles") vehicles = as_int();
    else if (full == "nodes.uavs") uavs = as_int();
    else if (full == "nodes.vehicle_max_speed_kmh") vehicle_max_speed_kmh = as_double();
    else if (full == "nodes.uav_speed_min_kmh") uav_speed_min_kmh = as_double();
    else if (full == "nodes.uav_speed_max_kmh") uav_speed_max_kmh = as_double();
    else if (full == "nodes.uav_altitude_m") uav_altitude_m = as_double();
    else if (full == "nodes.uturn_probability") uturn_probability = as_double();
    else if (full == "radio.range_m") range_m = as_double();
    else if (full == "radio.uav_range_m") uav_range_m = as_double();
    else if (full == "radio.hello_interval_s") hello_interval_s = as_double();
    else if (full == "radio.per_hop_latency_ms") per_hop_latency_ms = as_double();
    else if (full == "radio.processing_delay_ms") processing_delay_ms = as_double();
    else if (full == "radio.loss_probability") loss_probability = as_double();
    else if (full == "radio.staleness_factor") staleness_factor = as_int();
    else if (full == "radio.obstacle_rule") obstacle_rule = as_bool();
    else if (full == "flows.senders") senders = as_int();
    else if (full == "flows.packet_size_bytes") packet_size_bytes = as_int();
    else if (full == "flows.rate_pps") rate_pps = as_double();
    else if (full == "flows.flow_start_s") flow_start_s = as_double();
    else if (full == "flows.retry_budget") retry_budget = as_int();
    else if (full == "protocol.type") protocol = value;
    else if (full == "protocol.rreq_lifetime_s") rreq_lifetime_s = as_double();
    else if (full == "protocol.rreq_max_hops") rreq_max_hops = as_int();
    else if (full == "protocol.collection_window_ms") collection_window_ms = as_double();
    else if (full == "protocol.discovery_timeout_s") discovery_timeout_s = as_double();
    else if (full == "protocol.relay_in_listed_zone") relay_in_listed_zone = as_bool();
    else if (full == "sim.duration_s") duration_s = as_double();
    else if (full == "sim.mobility_step_ms") mobility_step_ms = as_double();
    else if (full == "sim.seed") seed = as_u64();
    else if (full == "sim.mobility") mobility = value;
    else if (full == "sim.trace_file") trace_file = value;
    else if (full == "sim.trace_dump_file") trace_dump_file = value;
    else return false;
    return true;
  }
};

}  // namespace uvr
