#include "driveloop/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace driveloop {

double wrap_angle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a < 0) a += 2.0 * M_PI;
  return a - M_PI;
}

Polyline::Polyline(std::vector<Vec2> pts) : pts_(std::move(pts)) {
  cum_.resize(pts_.size(), 0.0);
  for (std::size_t i = 1; i < pts_.size(); ++i) {
    cum_[i] = cum_[i - 1] + (pts_[i] - pts_[i - 1]).norm();
  }
}

Polyline::Projection Polyline::project(const Vec2& p) const {
  Projection best;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
    Vec2 a = pts_[i], b = pts_[i + 1];
    Vec2 ab = b - a;
    double len2 = ab.dot(ab);
    double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    Vec2 q = a + ab * t;
    double d2 = (p - q).dot(p - q);
    if (d2 < best_d2) {
      best_d2 = d2;
      best.s = cum_[i] + std::sqrt(len2) * t;
      best.point = q;
      // Signed lateral: positive when p lies left of the segment direction.
      double sign = ab.cross(p - a) >= 0.0 ? 1.0 : -1.0;
      best.lateral = sign * std::sqrt(d2);
    }
  }
  return best;
}

Vec2 Polyline::point_at(double s) const {
  if (pts_.empty()) return {};
  if (s <= 0.0) return pts_.front();
  if (s >= length()) return pts_.back();
  auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
  std::size_t i = static_cast<std::size_t>(it - cum_.begin()) - 1;
  i = std::min(i, pts_.size() - 2);
  double seg = cum_[i + 1] - cum_[i];
  double t = seg > 0.0 ? (s - cum_[i]) / seg : 0.0;
  return pts_[i] + (pts_[i + 1] - pts_[i]) * t;
}

double Polyline::heading_at(double s) const {
  if (pts_.size() < 2) return 0.0;
  s = std::clamp(s, 0.0, length());
  auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
  std::size_t i = static_cast<std::size_t>(it - cum_.begin());
  i = i > 0 ? i - 1 : 0;
  i = std::min(i, pts_.size() - 2);
  Vec2 d = pts_[i + 1] - pts_[i];
  return std::atan2(d.y, d.x);
}

double Polyline::curvature_at(double s, double window) const {
  if (pts_.size() < 2 || window <= 0.0) return 0.0;
  double h0 = heading_at(s);
  double h1 = heading_at(std::min(s + window, length()));
  return wrap_angle(h1 - h0) / window;
}

std::vector<Vec2> chord_walk(const std::vector<Vec2>& dense, const Vec2& start,
                             std::size_t count, double step) {
  std::vector<Vec2> out;
  out.reserve(count);
  Vec2 cur = start;
  std::size_t seg = 0;
  Vec2 dir{1.0, 0.0};
  if (dense.size() >= 2) {
    Vec2 d0 = dense[1] - dense[0];
    double n = d0.norm();
    if (n > 0) dir = d0 * (1.0 / n);
  }
  while (out.size() < count) {
    bool placed = false;
    // Find the first forward intersection of the circle |p - cur| = step with
    // the remaining polyline; exact quadratic per segment.
    for (; seg + 1 < dense.size(); ++seg) {
      Vec2 a = dense[seg], b = dense[seg + 1];
      Vec2 ab = b - a;
      double A = ab.dot(ab);
      if (A <= 0.0) continue;
      Vec2 ac = a - cur;
      double B = 2.0 * ab.dot(ac);
      double C = ac.dot(ac) - step * step;
      double disc = B * B - 4.0 * A * C;
      if (disc < 0.0) continue;
      double sq = std::sqrt(disc);
      double u = (-B + sq) / (2.0 * A);  // larger root = forward crossing
      if (u < 0.0 || u > 1.0) continue;
      cur = a + ab * u;
      Vec2 d = b - a;
      double n = d.norm();
      if (n > 0) dir = d * (1.0 / n);
      out.push_back(cur);
      placed = true;
      break;
    }
    if (!placed) {
      // Ran out of curve: continue along the last direction.
      cur = cur + dir * step;
      out.push_back(cur);
    }
  }
  return out;
}

bool obb_overlap(const Obb& a, const Obb& b) {
  auto corners = [](const Obb& o) {
    Pose p{o.center, o.heading};
    return std::array<Vec2, 4>{
        p.to_world({o.half_len, o.half_wid}), p.to_world({o.half_len, -o.half_wid}),
        p.to_world({-o.half_len, -o.half_wid}), p.to_world({-o.half_len, o.half_wid})};
  };
  auto ca = corners(a);
  auto cb = corners(b);
  auto separated = [](const std::array<Vec2, 4>& ca, const std::array<Vec2, 4>& cb,
                      double heading) {
    for (double ang : {heading, heading + M_PI / 2.0}) {
      Vec2 axis{std::cos(ang), std::sin(ang)};
      double amin = 1e300, amax = -1e300, bmin = 1e300, bmax = -1e300;
      for (const Vec2& c : ca) {
        double v = c.dot(axis);
        amin = std::min(amin, v);
        amax = std::max(amax, v);
      }
      for (const Vec2& c : cb) {
        double v = c.dot(axis);
        bmin = std::min(bmin, v);
        bmax = std::max(bmax, v);
      }
      if (amax < bmin || bmax < amin) return true;
    }
    return false;
  };
  return !separated(ca, cb, a.heading) && !separated(ca, cb, b.heading);
}

}  // namespace driveloop
