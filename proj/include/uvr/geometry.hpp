#pragma once

#include <algorithm>
#include <cmath>

namespace uvr {

struct Vec2 {
  double x{0.0};
  double y{0.0};
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(Vec2 a, double k) { return {a.x * k, a.y * k}; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double length(Vec2 a) { return std::sqrt(dot(a, a)); }
inline double distance(Vec2 a, Vec2 b) { return length(a - b); }

// Ground position plus altitude. Vehicles sit at altitude 0.
struct Point3 {
  double x{0.0};
  double y{0.0};
  double alt{0.0};

  Vec2 ground() const { return {x, y}; }
};

inline double distance3(const Point3& a, const Point3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.alt - b.alt;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline double ground_distance(const Point3& a, const Point3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

struct SegmentProjection {
  double offset{0.0};    // arc-length position of the closest point
  double distance{0.0};  // distance from the query point to the segment
};

// Closest point on the segment [a, b], reported as an offset along it.
inline SegmentProjection project_onto_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const Vec2 closest = a + ab * t;
  return {t * std::sqrt(len2), distance(p, closest)};
}

// Open axis-aligned rectangle test; boundary points do not count as inside.
inline bool strictly_inside_rect(Vec2 p, Vec2 lo, Vec2 hi) {
  return p.x > lo.x && p.x < hi.x && p.y > lo.y && p.y < hi.y;
}

// True when the open segment (p, q) passes through the interior of the
// rectangle [lo, hi]. Used by the obstacle model for ground links.
inline bool segment_crosses_rect_interior(Vec2 p, Vec2 q, Vec2 lo, Vec2 hi) {
  // Liang-Barsky clipping: find the parameter range of the segment inside
  // the closed rectangle, then check it has positive measure strictly
  // interior to the box.
  double t0 = 0.0, t1 = 1.0;
  const double dx = q.x - p.x, dy = q.y - p.y;
  const double pvals[4] = {-dx, dx, -dy, dy};
  const double qvals[4] = {p.x - lo.x, hi.x - p.x, p.y - lo.y, hi.y - p.y};
  for (int i = 0; i < 4; ++i) {
    if (pvals[i] == 0.0) {
      if (qvals[i] < 0.0) return false;  // parallel and outside
    } else {
      const double r = qvals[i] / pvals[i];
      if (pvals[i] < 0.0) {
        t0 = std::max(t0, r);
      } else {
        t1 = std::min(t1, r);
      }
      if (t0 > t1) return false;
    }
  }
  // The clipped range lies within the closed box; a crossing of the open
  // interior needs a midpoint strictly inside (rules out edge-grazing).
  if (t1 - t0 <= 1e-12) return false;
  const double tm = 0.5 * (t0 + t1);
  return strictly_inside_rect({p.x + tm * dx, p.y + tm * dy}, lo, hi);
}

}  // namespace uvr
