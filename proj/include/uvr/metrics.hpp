#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "uvr/event_log.hpp"
#include "uvr/types.hpp"

namespace uvr {

// Per-run evaluation metrics. All derived values come from the integer
// counters, so two reports are equal exactly when their counters are.
struct MetricsReport {
  long long sent{0};
  long long delivered{0};
  long long dropped{0};
  long long expired{0};
  long long rreq_tx{0};
  long long rrep_tx{0};
  long long rerr_tx{0};
  long long hello_tx{0};
  long long total_hops{0};      // over delivered packets
  long long total_delay_us{0};  // over delivered packets

  long long control_tx() const { return rreq_tx + rrep_tx + rerr_tx + hello_tx; }

  double pdr() const {
    return sent > 0 ? static_cast<double>(delivered) / static_cast<double>(sent) : 0.0;
  }
  // Undefined (NaN / infinity markers) when nothing was delivered.
  double eed_s() const {
    if (delivered == 0) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(total_delay_us) / static_cast<double>(delivered) * 1e-6;
  }
  double avg_hops() const {
    if (delivered == 0) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(total_hops) / static_cast<double>(delivered);
  }
  double overhead() const {
    if (delivered == 0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(control_tx()) / static_cast<double>(delivered);
  }

  bool operator==(const MetricsReport&) const = default;
};

// Recomputes the report from a protocol event log. Used both as the
// `metrics` CLI path and as an independent audit of the in-run counters.
inline MetricsReport compute_metrics(std::string_view log) {
  MetricsReport r;
  std::size_t pos = 0;
  LogLine line;
  while (pos < log.size()) {
    auto end = log.find('\n', pos);
    if (end == std::string_view::npos) end = log.size();
    const auto text = log.substr(pos, end - pos);
    pos = end + 1;
    if (!parse_log_line(text, line)) continue;
    if (line.event == "tx") {
      if (line.pkind == "rreq") ++r.rreq_tx;
      else if (line.pkind == "rrep") ++r.rrep_tx;
      else if (line.pkind == "rerr") ++r.rerr_tx;
      else if (line.pkind == "hello") ++r.hello_tx;
    } else if (line.event == "send") {
      ++r.sent;
    } else if (line.event == "deliver") {
      ++r.delivered;
      r.total_hops += detail_int(line.detail, "hops", 0);
      r.total_delay_us += line.time - detail_int(line.detail, "orig_us", line.time);
    } else if (line.event == "drop") {
      ++r.dropped;
    } else if (line.event == "expire") {
      ++r.expired;
    }
  }
  return r;
}

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline std::string format_report(const MetricsReport& r) {
  std::string out;
  out += "pdr " + format_double(r.pdr()) + "\n";
  out += "eed_s " + format_double(r.eed_s()) + "\n";
  out += "avg_hops " + format_double(r.avg_hops()) + "\n";
  out += "overhead " + format_double(r.overhead()) + "\n";
  out += "sent " + std::to_string(r.sent) + "\n";
  out += "delivered " + std::to_string(r.delivered) + "\n";
  out += "dropped " + std::to_string(r.dropped) + "\n";
  out += "expired " + std::to_string(r.expired) + "\n";
  out += "rreq_tx " + std::to_string(r.rreq_tx) + "\n";
  out += "rrep_tx " + std::to_string(r.rrep_tx) + "\n";
  out += "rerr_tx " + std::to_string(r.rerr_tx) + "\n";
  out += "hello_tx " + std::to_string(r.hello_tx) + "\n";
  return out;
}

struct Aggregate {
  double mean{std::numeric_limits<double>::quiet_NaN()};
  double sd{std::numeric_limits<double>::quiet_NaN()};
  int samples{0};
};

// Mean and population standard deviation, skipping undefined samples
// (runs that delivered nothing have no defined delay or hop count).
inline Aggregate aggregate_values(const std::vector<double>& values) {
  Aggregate a;
  double sum = 0.0;
  for (double v : values) {
    if (std::isnan(v) || std::isinf(v)) continue;
    sum += v;
    ++a.samples;
  }
  if (a.samples == 0) return a;
  a.mean = sum / a.samples;
  double ss = 0.0;
  for (double v : values) {
    if (std::isnan(v) || std::isinf(v)) continue;
    const double d = v - a.mean;
    ss += d * d;
  }
  a.sd = std::sqrt(ss / a.samples);
  return a;
}

struct AggregateReport {
  Aggregate pdr;
  Aggregate eed_s;
  Aggregate avg_hops;
  Aggregate overhead;
  int runs{0};
};

inline AggregateReport aggregate_reports(const std::vector<MetricsReport>& reports) {
  AggregateReport agg;
  agg.runs = static_cast<int>(reports.size());
  std::vector<double> pdr, eed, hops, overhead;
  for (const auto& r : reports) {
    pdr.push_back(r.pdr());
    eed.push_back(r.eed_s());
    hops.push_back(r.avg_hops());
    overhead.push_back(r.overhead());
  }
  agg.pdr = aggregate_values(pdr);
  agg.eed_s = aggregate_values(eed);
  agg.avg_hops = aggregate_values(hops);
  agg.overhead = aggregate_values(overhead);
  return agg;
}

}  // namespace uvr
