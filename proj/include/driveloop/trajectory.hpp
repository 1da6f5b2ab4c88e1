#pragma once

#include <array>

#include "driveloop/geometry.hpp"

namespace driveloop {

inline constexpr int kPathWaypoints = 20;   // 20 m path, 1 m spacing
inline constexpr int kSpeedWaypoints = 6;   // 3 s at 2 Hz
inline constexpr double kPathSpacing = 1.0;
inline constexpr double kSpeedDt = 0.5;

// The executable action: a geometric path plus a temporal speed profile, both
// as planar points in the ego frame at decision time. Speed waypoint k is the
// position the ego should occupy at t = (k+1) * 0.5 s.
struct Trajectory {
  std::array<Vec2, kPathWaypoints> path;
  std::array<Vec2, kSpeedWaypoints> speed;

  // Distance origin -> first speed waypoint, over 0.5 s: the immediate speed
  // the profile implies. Used by the longitudinal controller.
  double implied_speed() const { return speed[0].norm() / kSpeedDt; }
};

// Shape + finiteness + chord-spacing check. `spacing_tol` is 1e-6 for
// procedural trajectories, 0.1 for learned ones.
bool trajectory_valid(const Trajectory& t, double spacing_tol,
                      double* max_spacing_err = nullptr);

}  // namespace driveloop
