#include "driveloop/trajectory.hpp"

#include <cmath>

namespace driveloop {

bool trajectory_valid(const Trajectory& t, double spacing_tol, double* max_spacing_err) {
  double worst = 0.0;
  for (const Vec2& p : t.path) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
  }
  for (const Vec2& p : t.speed) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
  }
  Vec2 prev{0.0, 0.0};
  for (const Vec2& p : t.path) {
    worst = std::max(worst, std::abs((p - prev).norm() - kPathSpacing));
    prev = p;
  }
  if (max_spacing_err) *max_spacing_err = worst;
  return worst <= spacing_tol;
}

}  // namespace driveloop
