#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "uvr/geometry.hpp"
#include "uvr/types.hpp"

namespace uvr {

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TraceSample {
  double t{0.0};
  Point3 pos;
};

// Time-indexed position series per node, replayable in place of the
// built-in mobility models. Format: one record per line,
// `time node_id x y [z]`, whitespace-separated, seconds and meters.
class Trace {
 public:
  static Trace load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TraceError("cannot open trace file: " + path);
    return parse(in, path);
  }

  static Trace parse(std::istream& in, const std::string& name = "<trace>") {
    Trace trace;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
      std::istringstream fields(line);
      double t, x, y, z = 0.0;
      NodeId node;
      if (!(fields >> t >> node >> x >> y)) {
        throw TraceError(name + ":" + std::to_string(line_no) + ": malformed trace record");
      }
      fields >> z;  // altitude is optional
      std::string extra;
      if (fields >> extra)
        throw TraceError(name + ":" + std::to_string(line_no) + ": trailing fields");
      auto& series = trace.series_[node];
      if (!series.empty() && t <= series.back().t)
        throw TraceError(name + ":" + std::to_string(line_no) +
                         ": non-monotonic timestamp for node " + std::to_string(node));
      series.push_back({t, {x, y, z}});
    }
    if (trace.series_.empty()) throw TraceError(name + ": empty trace");
    return trace;
  }

  void append(NodeId node, double t, Point3 pos) { series_[node].push_back({t, pos}); }

  // Position at time t: exact at sample instants, linear in between, and
  // clamped to the first/last sample outside the recorded span.
  Point3 position_at(NodeId node, double t) const {
    const auto it = series_.find(node);
    if (it == series_.end() || it->second.empty())
      throw TraceError("no trace data for node " + std::to_string(node));
    const auto& s = it->second;
    if (t <= s.front().t) return s.front().pos;
    if (t >= s.back().t) return s.back().pos;
    std::size_t lo = 0, hi = s.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (s[mid].t <= t)
        lo = mid;
      else
        hi = mid;
    }
    if (s[lo].t == t) return s[lo].pos;
    const double u = (t - s[lo].t) / (s[hi].t - s[lo].t);
    return {s[lo].pos.x + u * (s[hi].pos.x - s[lo].pos.x),
            s[lo].pos.y + u * (s[hi].pos.y - s[lo].pos.y),
            s[lo].pos.alt + u * (s[hi].pos.alt - s[lo].pos.alt)};
  }

  bool has_node(NodeId node) const { return series_.count(node) > 0; }

  std::vector<NodeId> node_ids() const {
    std::vector<NodeId> ids;
    ids.reserve(series_.size());
    for (const auto& [id, _] : series_) ids.push_back(id);
    return ids;
  }

  // A node with any nonzero altitude sample is treated as a UAV.
  bool is_uav(NodeId node) const {
    const auto it = series_.find(node);
    if (it == series_.end()) return false;
    for (const TraceSample& s : it->second)
      if (s.pos.alt > 0.0) return true;
    return false;
  }

  void save(std::ostream& out) const {
    // records grouped by time so the file reads chronologically
    std::multimap<double, std::string> lines;
    char buf[160];
    for (const auto& [node, series] : series_) {
      for (const TraceSample& s : series) {
        if (s.pos.alt != 0.0)
          std::snprintf(buf, sizeof(buf), "%.17g %u %.17g %.17g %.17g\n", s.t, node, s.pos.x,
                        s.pos.y, s.pos.alt);
        else
          std::snprintf(buf, sizeof(buf), "%.17g %u %.17g %.17g\n", s.t, node, s.pos.x, s.pos.y);
        lines.emplace(s.t, buf);
      }
    }
    for (const auto& [_, line] : lines) out << line;
  }

  void save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw TraceError("cannot write trace file: " + path);
    save(out);
  }

 private:
  std::map<NodeId, std::vector<TraceSample>> series_;
};

}  // namespace uvr
