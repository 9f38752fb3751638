#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

namespace uvr {

using NodeId = std::uint32_t;    // 1-based; 0 means "none"
using SegmentId = std::uint32_t; // 1-based; 0 means "none"
using ZoneId = std::uint32_t;    // 1-based; 0 means "none"

// Simulation time in integer microseconds. Keeping time integral makes
// event ordering and log formatting exact across replays.
using SimTime = std::int64_t;

inline constexpr SimTime us_per_s = 1'000'000;

inline constexpr SimTime us_from_s(double s) {
  return static_cast<SimTime>(s * 1e6 + (s >= 0 ? 0.5 : -0.5));
}

inline constexpr double s_from_us(SimTime t) { return static_cast<double>(t) * 1e-6; }

inline std::string format_time(SimTime t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%lld.%06lld", static_cast<long long>(t / us_per_s),
                static_cast<long long>(t % us_per_s));
  return buf;
}

}  // namespace uvr
