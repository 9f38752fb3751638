#pragma once

#include <array>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "uvr/geometry.hpp"
#include "uvr/types.hpp"

namespace uvr {

struct Segment {
  SegmentId id{0};
  std::uint32_t endpoint_a{0};  // intersection indices
  std::uint32_t endpoint_b{0};
  double length{0.0};
};

// Fixed-length slice of a road segment. Zones are the protocol's spatial
// addressing unit; ids are unique and contiguous from 1 across the map.
struct Zone {
  ZoneId id{0};
  SegmentId segment{0};
  double start_offset{0.0};
  double end_offset{0.0};
};

// One city block: the rectangle enclosed by four road segments. Blocks act
// as obstacles for vehicle-to-vehicle links and as UAV patrol areas.
struct Block {
  Vec2 lo;
  Vec2 hi;
  std::array<SegmentId, 4> edges{};
};

inline constexpr double kMaxZoneSize = 300.0;       // zone size is capped by radio range
inline constexpr double kDefaultSnapTolerance = 5.0;

// Grid road map: `rows` horizontal roads by `cols` vertical roads, spaced
// `block_length` apart, every segment tiled by equal-length zones.
class RoadMap {
 public:
  static RoadMap build_grid(int rows, int cols, double block_length, double zone_size) {
    if (rows < 2 || cols < 2) throw std::invalid_argument("road map needs at least a 2x2 grid");
    if (block_length <= 0.0) throw std::invalid_argument("block length must be positive");
    if (zone_size <= 0.0) throw std::invalid_argument("zone size must be positive");
    if (zone_size > kMaxZoneSize)
      throw std::invalid_argument("zone size exceeds the communication range");

    RoadMap m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.block_length_ = block_length;
    m.zone_size_ = zone_size;

    m.intersections_.reserve(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        m.intersections_.push_back({c * block_length, r * block_length});

    m.segs_at_intersection_.assign(m.intersections_.size(), {});
    auto add_segment = [&m](std::uint32_t a, std::uint32_t b) {
      Segment s;
      s.id = static_cast<SegmentId>(m.segments_.size() + 1);
      s.endpoint_a = a;
      s.endpoint_b = b;
      s.length = distance(m.intersections_[a], m.intersections_[b]);
      m.segments_.push_back(s);
      m.segs_at_intersection_[a].push_back(s.id);
      m.segs_at_intersection_[b].push_back(s.id);
    };
    // horizontal segments first, then vertical; both in row-major order
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c + 1 < cols; ++c)
        add_segment(m.intersection_index(r, c), m.intersection_index(r, c + 1));
    for (int r = 0; r + 1 < rows; ++r)
      for (int c = 0; c < cols; ++c)
        add_segment(m.intersection_index(r, c), m.intersection_index(r + 1, c));

    m.first_zone_.reserve(m.segments_.size());
    m.zone_count_.reserve(m.segments_.size());
    for (const Segment& s : m.segments_) {
      const auto n = static_cast<std::uint32_t>(std::ceil(s.length / zone_size));
      const double step = s.length / n;
      m.first_zone_.push_back(static_cast<ZoneId>(m.zones_.size() + 1));
      m.zone_count_.push_back(n);
      for (std::uint32_t i = 0; i < n; ++i) {
        Zone z;
        z.id = static_cast<ZoneId>(m.zones_.size() + 1);
        z.segment = s.id;
        z.start_offset = i * step;
        z.end_offset = (i + 1 == n) ? s.length : (i + 1) * step;
        m.zones_.push_back(z);
      }
    }

    for (int r = 0; r + 1 < rows; ++r)
      for (int c = 0; c + 1 < cols; ++c) {
        Block b;
        b.lo = m.intersections_[m.intersection_index(r, c)];
        b.hi = m.intersections_[m.intersection_index(r + 1, c + 1)];
        b.edges = {m.horizontal_segment(r, c), m.horizontal_segment(r + 1, c),
                   m.vertical_segment(r, c), m.vertical_segment(r, c + 1)};
        m.blocks_.push_back(b);
      }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double block_length() const { return block_length_; }
  double zone_size() const { return zone_size_; }

  const std::vector<Vec2>& intersections() const { return intersections_; }
  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<Zone>& zones() const { return zones_; }
  const std::vector<Block>& blocks() const { return blocks_; }

  const Segment& segment(SegmentId id) const { return segments_.at(id - 1); }
  const Zone& zone(ZoneId id) const { return zones_.at(id - 1); }

  const std::vector<SegmentId>& segments_at_intersection(std::uint32_t index) const {
    return segs_at_intersection_.at(index);
  }

  std::uint32_t intersection_index(int row, int col) const {
    return static_cast<std::uint32_t>(row * cols_ + col);
  }

  Vec2 point_on_segment(SegmentId id, double offset) const {
    const Segment& s = segment(id);
    const Vec2 a = intersections_[s.endpoint_a];
    const Vec2 b = intersections_[s.endpoint_b];
    const double t = s.length > 0.0 ? offset / s.length : 0.0;
    return a + (b - a) * t;
  }

  // Zone containing `offset` along a segment. A position exactly on a zone
  // boundary belongs to the lower-id zone.
  ZoneId zone_at(SegmentId seg, double offset) const {
    const std::uint32_t n = zone_count_.at(seg - 1);
    const double step = segment(seg).length / n;
    auto idx = static_cast<std::int64_t>(offset / step);
    if (idx >= n) idx = n - 1;
    if (idx < 0) idx = 0;
    if (idx > 0 && offset <= static_cast<double>(idx) * step) --idx;
    return first_zone_.at(seg - 1) + static_cast<ZoneId>(idx);
  }

  // Resolves a ground position to its zone by projecting onto the nearest
  // segment (ties broken toward the lower segment id). Positions farther
  // than `snap_tolerance` from every segment are off-road.
  ZoneId zone_of(Vec2 position, double snap_tolerance = kDefaultSnapTolerance) const {
    SegmentId best_seg = 0;
    double best_dist = 0.0, best_offset = 0.0;
    for (const Segment& s : segments_) {
      const SegmentProjection pr =
          project_onto_segment(position, intersections_[s.endpoint_a], intersections_[s.endpoint_b]);
      if (best_seg == 0 || pr.distance < best_dist) {
        best_seg = s.id;
        best_dist = pr.distance;
        best_offset = pr.offset;
      }
    }
    if (best_seg == 0 || best_dist > snap_tolerance)
      throw std::out_of_range("position is off-road (beyond snap tolerance)");
    return zone_at(best_seg, best_offset);
  }

  Vec2 zone_center(ZoneId id) const {
    const Zone& z = zone(id);
    return point_on_segment(z.segment, 0.5 * (z.start_offset + z.end_offset));
  }

  // True when the two segments meet at an intersection; reports its index.
  bool shared_intersection(SegmentId sa, SegmentId sb, std::uint32_t* shared = nullptr) const {
    const Segment& a = segment(sa);
    const Segment& b = segment(sb);
    for (std::uint32_t ia : {a.endpoint_a, a.endpoint_b})
      for (std::uint32_t ib : {b.endpoint_a, b.endpoint_b})
        if (ia == ib) {
          if (shared) *shared = ia;
          return true;
        }
    return false;
  }

  std::string zones_csv() const {
    std::string out = "zone_id,segment_id,start_offset,end_offset\n";
    char line[128];
    for (const Zone& z : zones_) {
      std::snprintf(line, sizeof(line), "%u,%u,%.6f,%.6f\n", z.id, z.segment, z.start_offset,
                    z.end_offset);
      out += line;
    }
    return out;
  }

 private:
  SegmentId horizontal_segment(int r, int c) const {
    return static_cast<SegmentId>(r * (cols_ - 1) + c + 1);
  }
  SegmentId vertical_segment(int r, int c) const {
    return static_cast<SegmentId>(rows_ * (cols_ - 1) + r * cols_ + c + 1);
  }

  int rows_{0};
  int cols_{0};
  double block_length_{0.0};
  double zone_size_{0.0};
  std::vector<Vec2> intersections_;
  std::vector<Segment> segments_;
  std::vector<Zone> zones_;
  std::vector<Block> blocks_;
  std::vector<std::vector<SegmentId>> segs_at_intersection_;
  std::vector<ZoneId> first_zone_;        // per segment
  std::vector<std::uint32_t> zone_count_; // per segment
};

}  // namespace uvr
