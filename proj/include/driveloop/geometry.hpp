#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace driveloop {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  double norm() const { return std::hypot(x, y); }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  Vec2 rotated(double a) const {
    double c = std::cos(a), s = std::sin(a);
    return {c * x - s * y, s * x + c * y};
  }
};

// Wrap to [-pi, pi).
double wrap_angle(double a);

struct Pose {
  Vec2 pos;
  double heading = 0.0;

  Vec2 to_world(const Vec2& local) const { return pos + local.rotated(heading); }
  Vec2 to_local(const Vec2& world) const { return (world - pos).rotated(-heading); }
};

// Piecewise-linear curve with a precomputed arc-length table.
class Polyline {
 public:
  Polyline() = default;
  explicit Polyline(std::vector<Vec2> pts);

  const std::vector<Vec2>& points() const { return pts_; }
  std::size_t size() const { return pts_.size(); }
  double length() const { return cum_.empty() ? 0.0 : cum_.back(); }

  struct Projection {
    double s = 0.0;        // arc length of the closest point
    double lateral = 0.0;  // signed offset, left of travel direction positive
    Vec2 point;            // the closest point itself
  };
  Projection project(const Vec2& p) const;

  Vec2 point_at(double s) const;     // clamped to [0, length]
  double heading_at(double s) const;

  // Mean heading change per meter over [s, s + window], a discrete curvature.
  double curvature_at(double s, double window = 4.0) const;

 private:
  std::vector<Vec2> pts_;
  std::vector<double> cum_;
};

// Walk a dense polyline placing `count` points so that consecutive Euclidean
// spacing is exactly `step` (chord stepping). Extends along the final segment
// direction if the curve runs out.
std::vector<Vec2> chord_walk(const std::vector<Vec2>& dense, const Vec2& start,
                             std::size_t count, double step);

// Oriented rectangle overlap test (separating axis), for collision checks.
struct Obb {
  Vec2 center;
  double heading = 0.0;
  double half_len = 0.0;  // along heading
  double half_wid = 0.0;
};
bool obb_overlap(const Obb& a, const Obb& b);

// Axis-aligned-in-local-frame trigger region attached to a pose.
struct Region {
  Pose pose;
  double half_len = 0.0;
  double half_wid = 0.0;

  bool contains(const Vec2& p) const {
    Vec2 q = pose.to_local(p);
    return std::abs(q.x) <= half_len && std::abs(q.y) <= half_wid;
  }
};

}  // namespace driveloop
