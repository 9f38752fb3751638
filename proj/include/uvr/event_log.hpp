#pragma once

#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "uvr/types.hpp"

namespace uvr {

// Line-oriented protocol event log:
//   time event_kind node packet_kind id detail...
// `id` is "src:seq" for discoveries, "flow:seq" for data, "-" otherwise.
// Detail tokens are `key=value` pairs. Times print with microsecond
// precision so replayed runs produce byte-identical logs.
class EventLog {
 public:
  void append(SimTime t, std::string_view event, NodeId node, std::string_view pkind,
              std::string_view id, std::string_view detail = {}) {
    buffer_ += format_time(t);
    buffer_ += ' ';
    buffer_ += event;
    buffer_ += ' ';
    buffer_ += std::to_string(node);
    buffer_ += ' ';
    buffer_ += pkind;
    buffer_ += ' ';
    buffer_ += id;
    if (!detail.empty()) {
      buffer_ += ' ';
      buffer_ += detail;
    }
    buffer_ += '\n';
  }

  const std::string& text() const { return buffer_; }
  std::string take() { return std::move(buffer_); }
  void clear() { buffer_.clear(); }

 private:
  std::string buffer_;
};

struct LogLine {
  SimTime time{0};
  std::string_view event;
  NodeId node{0};
  std::string_view pkind;
  std::string_view id;
  std::string_view detail;  // remainder of the line
};

// Splits one log line; returns false on blank/malformed input.
inline bool parse_log_line(std::string_view line, LogLine& out) {
  const auto next_token = [&line]() -> std::string_view {
    const auto start = line.find_first_not_of(' ');
    if (start == std::string_view::npos) return {};
    auto end = line.find(' ', start);
    if (end == std::string_view::npos) end = line.size();
    const auto tok = line.substr(start, end - start);
    line.remove_prefix(end);
    return tok;
  };
  const auto time_tok = next_token();
  if (time_tok.empty()) return false;
  // parse seconds.micros without floating point
  const auto dot = time_tok.find('.');
  if (dot == std::string_view::npos || time_tok.size() - dot - 1 != 6) return false;
  SimTime secs = 0, micros = 0;
  for (std::size_t i = 0; i < dot; ++i) {
    if (time_tok[i] < '0' || time_tok[i] > '9') return false;
    secs = secs * 10 + (time_tok[i] - '0');
  }
  for (std::size_t i = dot + 1; i < time_tok.size(); ++i) {
    if (time_tok[i] < '0' || time_tok[i] > '9') return false;
    micros = micros * 10 + (time_tok[i] - '0');
  }
  out.time = secs * us_per_s + micros;
  out.event = next_token();
  const auto node_tok = next_token();
  out.pkind = next_token();
  out.id = next_token();
  if (out.event.empty() || node_tok.empty() || out.pkind.empty() || out.id.empty()) return false;
  out.node = 0;
  for (char c : node_tok) {
    if (c < '0' || c > '9') return false;
    out.node = out.node * 10 + static_cast<NodeId>(c - '0');
  }
  const auto rest = line.find_first_not_of(' ');
  out.detail = rest == std::string_view::npos ? std::string_view{} : line.substr(rest);
  return true;
}

// Extracts an integer `key=value` detail field; returns fallback if absent.
inline long long detail_int(std::string_view detail, std::string_view key, long long fallback) {
  std::size_t pos = 0;
  while (pos < detail.size()) {
    auto end = detail.find(' ', pos);
    if (end == std::string_view::npos) end = detail.size();
    const auto tok = detail.substr(pos, end - pos);
    const auto eq = tok.find('=');
    if (eq != std::string_view::npos && tok.substr(0, eq) == key) {
      long long v = 0;
      bool neg = false;
      std::size_t i = eq + 1;
      if (i < tok.size() && tok[i] == '-') {
        neg = true;
        ++i;
      }
      for (; i < tok.size(); ++i) {
        if (tok[i] < '0' || tok[i] > '9') return fallback;
        v = v * 10 + (tok[i] - '0');
      }
      return neg ? -v : v;
    }
    pos = end + 1;
  }
  return fallback;
}

}  // namespace uvr
