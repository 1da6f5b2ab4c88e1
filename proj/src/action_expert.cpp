#include "driveloop/action_expert.hpp"

#include <algorithm>
#include <cmath>

#include "driveloop/error.hpp"

namespace driveloop {

namespace {

// Dense ego-frame centerline for the chord walk. Primitives that need
// numeric stepping (lane change, lane follow) sample at centimeter scale.
constexpr double kDenseStep = 0.01;
constexpr double kCurveExtent = 32.0;  // generate a bit past the 20 m horizon

std::vector<Vec2> dense_straight() {
  std::vector<Vec2> pts;
  pts.reserve(3);
  pts.push_back({0.0, 0.0});
  pts.push_back({kCurveExtent, 0.0});
  return pts;
}

std::vector<Vec2> dense_lane_change(double offset) {
  std::vector<Vec2> pts;
  std::size_t n = static_cast<std::size_t>(kCurveExtent / kDenseStep);
  pts.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    double x = i * kDenseStep;
    double u = std::min(x / kLaneChangeLength, 1.0);
    double y = offset * (3.0 * u * u - 2.0 * u * u * u);
    pts.push_back({x, y});
  }
  return pts;
}

// Ego-frame lane-follow centerline: the route ahead with the current lateral
// offset decaying smoothly over a short blend distance.
std::vector<Vec2> dense_lane_follow(const WorldState& w) {
  const Polyline& route = *w.route;
  Polyline::Projection proj = route.project(w.ego.pose.pos);
  Vec2 start_on_route = w.ego.pose.to_local(route.point_at(proj.s));
  Vec2 offset0 = Vec2{0.0, 0.0} - start_on_route;  // ego origin relative to route
  double blend = std::clamp(3.0 * std::abs(proj.lateral), 2.0, 12.0);

  std::vector<Vec2> pts;
  std::size_t n = static_cast<std::size_t>(kCurveExtent / 0.05);
  pts.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    double s = i * 0.05;
    Vec2 on_route = w.ego.pose.to_local(route.point_at(proj.s + s));
    double u = std::min(s / blend, 1.0);
    double decay = 1.0 - (3.0 * u * u - 2.0 * u * u * u);
    pts.push_back(on_route + offset0 * decay);
  }
  return pts;
}

std::array<Vec2, kPathWaypoints> path_points(const WorldState& w, PathAction path) {
  std::array<Vec2, kPathWaypoints> out;
  switch (path) {
    case PathAction::Straight: {
      for (int k = 0; k < kPathWaypoints; ++k) out[k] = {double(k + 1), 0.0};
      return out;
    }
    case PathAction::TurnLeft:
    case PathAction::TurnRight: {
      // Exact chord stepping around a circle of radius kTurnRadius: each 1 m
      // chord subtends 2*asin(1/(2R)).
      double sign = path == PathAction::TurnLeft ? 1.0 : -1.0;
      double phi = 2.0 * std::asin(0.5 / kTurnRadius);
      Vec2 p{0.0, 0.0};
      double theta = 0.0;
      for (int k = 0; k < kPathWaypoints; ++k) {
        double dir = theta + sign * phi * 0.5;
        p += Vec2{std::cos(dir), std::sin(dir)};
        theta += sign * phi;
        out[k] = p;
      }
      return out;
    }
    case PathAction::ChangeLaneLeft:
    case PathAction::ChangeLaneRight: {
      double offset = path == PathAction::ChangeLaneLeft ? 3.5 : -3.5;
      auto pts = chord_walk(dense_lane_change(offset), {0.0, 0.0}, kPathWaypoints, 1.0);
      std::copy(pts.begin(), pts.end(), out.begin());
      return out;
    }
    case PathAction::LaneFollow: {
      auto pts = chord_walk(dense_lane_follow(w), {0.0, 0.0}, kPathWaypoints, 1.0);
      std::copy(pts.begin(), pts.end(), out.begin());
      return out;
    }
  }
  for (int k = 0; k < kPathWaypoints; ++k) out[k] = {double(k + 1), 0.0};
  return out;
}

struct SpeedPlan {
  double target = 0.0;
  double accel = kNormalAccel;
};

SpeedPlan speed_plan(double v0, SpeedAction speed) {
  switch (speed) {
    case SpeedAction::Stop: return {0.0, kNormalAccel};
    case SpeedAction::MaintainSlowSpeed: return {kSlowSpeed, kNormalAccel};
    case SpeedAction::MaintainModerateSpeed: return {kModerateSpeed, kNormalAccel};
    case SpeedAction::MaintainFastSpeed: return {kFastSpeed, kNormalAccel};
    case SpeedAction::SpeedUp: return {v0 + kSpeedDelta, kNormalAccel};
    case SpeedAction::SlowDown: return {std::max(0.0, v0 - kSpeedDelta), kNormalAccel};
    case SpeedAction::SlowdownRapidly:
      return {std::max(0.0, v0 - kRapidDelta), kRapidAccel};
  }
  return {v0, kNormalAccel};
}

// Closed-form distance traveled after tau seconds when ramping from v0 to the
// target at +-accel and holding.
double distance_at(double v0, double target, double accel, double tau) {
  double t_reach = std::abs(target - v0) / accel;
  double a = target >= v0 ? accel : -accel;
  if (tau <= t_reach) {
    return v0 * tau + 0.5 * a * tau * tau;
  }
  double ramp = v0 * t_reach + 0.5 * a * t_reach * t_reach;
  return ramp + target * (tau - t_reach);
}

// Position at arc length s along the waypoint polyline (origin prepended),
// extrapolating along the last direction when s exceeds the path.
Vec2 point_along(const std::array<Vec2, kPathWaypoints>& path, double s) {
  Vec2 prev{0.0, 0.0};
  for (int k = 0; k < kPathWaypoints; ++k) {
    double seg = (path[k] - prev).norm();
    if (s <= seg || seg <= 0.0) {
      double t = seg > 0.0 ? s / seg : 0.0;
      return prev + (path[k] - prev) * t;
    }
    s -= seg;
    prev = path[k];
  }
  Vec2 dir = path[kPathWaypoints - 1] - path[kPathWaypoints - 2];
  double n = dir.norm();
  if (n > 0.0) dir = dir * (1.0 / n);
  return path[kPathWaypoints - 1] + dir * s;
}

}  // namespace

Trajectory oracle_trajectory(const WorldState& world, MetaAction meta) {
  Trajectory traj;
  traj.path = path_points(world, meta.path);
  SpeedPlan plan = speed_plan(world.ego.speed, meta.speed);
  for (int k = 0; k < kSpeedWaypoints; ++k) {
    double tau = kSpeedDt * (k + 1);
    double s = distance_at(world.ego.speed, plan.target, plan.accel, tau);
    traj.speed[k] = point_along(traj.path, s);
  }
  return traj;
}

bool path_action_feasible(const WorldState& world, PathAction path) {
  if (path != PathAction::ChangeLaneLeft && path != PathAction::ChangeLaneRight)
    return true;
  const ScenarioSpec& spec = *world.spec;
  double lat = world.route->project(world.ego.pose.pos).lateral;
  int lane_index = static_cast<int>(std::lround(lat / spec.lane_width));
  if (path == PathAction::ChangeLaneLeft) return lane_index + 1 <= spec.lanes_left;
  return lane_index - 1 >= -spec.lanes_right;
}

CandidateSet candidate_set(const WorldState& world, const TrajectorySource& source,
                           const StateEmbedding& emb) {
  CandidateSet set;
  set.entries.reserve(kNumJointActions);
  for (int j = 0; j < kNumJointActions; ++j) {
    MetaAction meta = MetaAction::from_joint(j);
    CandidateEntry entry;
    entry.meta = meta;
    entry.feasible = path_action_feasible(world, meta.path);
    entry.traj = source.generate(world, emb, meta);
    set.entries.push_back(std::move(entry));
  }
  return set;
}

const CandidateEntry& select_optimal(const CandidateSet& cands,
                                     const ActionDistribution& dist) {
  const CandidateEntry* best = nullptr;
  double best_score = -1.0;
  for (const CandidateEntry& e : cands.entries) {
    if (!e.feasible) continue;
    double score = dist.speed_probs[static_cast<int>(e.meta.speed)] *
                   dist.path_probs[static_cast<int>(e.meta.path)];
    if (score > best_score) {  // strict: earliest joint index wins ties
      best_score = score;
      best = &e;
    }
  }
  if (!best) throw ArgumentError("select_optimal: no feasible candidate");
  return *best;
}

}  // namespace driveloop
