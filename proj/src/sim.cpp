#include "driveloop/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "driveloop/error.hpp"

namespace driveloop {

std::string_view to_string(PenaltyKind k) {
  switch (k) {
    case PenaltyKind::Collision: return "Collision";
    case PenaltyKind::RedLight: return "RedLight";
    case PenaltyKind::RouteDeviation: return "RouteDeviation";
    case PenaltyKind::StopSignViolation: return "StopSignViolation";
  }
  return "Collision";
}

double corridor_halfwidth(const ScenarioSpec& spec, int side) {
  int lanes = side > 0 ? spec.lanes_left : spec.lanes_right;
  return spec.lane_width * (0.5 + lanes);
}

WorldState load_scenario(const ScenarioSpec& spec, std::uint64_t seed) {
  validate_scenario(spec);
  WorldState w;
  w.spec = std::make_shared<const ScenarioSpec>(spec);
  w.route = std::make_shared<const Polyline>(spec.route);
  w.ego.pose = spec.ego_start;
  w.ego.speed = 0.0;
  for (const AgentScript& script : spec.agents) {
    AgentState a;
    a.pose = script.start;
    a.half_extents = script.half_extents;
    a.speed = 0.0;
    a.path_s = 0.0;
    std::shared_ptr<const Polyline> path;
    if (script.path.size() >= 2) {
      path = std::make_shared<const Polyline>(script.path);
      a.path_s = path->project(script.start.pos).s;
    }
    w.agent_paths.push_back(std::move(path));
    w.agents.push_back(a);
  }
  for (const TrafficControl& c : spec.controls) {
    ControlState cs;
    cs.kind = c.kind;
    cs.region = Region{c.pose, c.region_half_len, c.region_half_wid};
    cs.green_at = c.kind == ControlKind::GreenLight ? 0.0 : c.green_at;
    w.controls.push_back(cs);
  }
  w.t = 0.0;
  w.step_index = 0;
  w.progress_max = 0.0;
  w.seed = seed;
  return w;
}

namespace {

double scheduled_speed(const AgentScript& script, double t) {
  double v = script.speed_profile.front().second;
  for (const auto& [start, speed] : script.speed_profile) {
    if (t + 1e-12 >= start) v = speed;
  }
  return v;
}

// Blocked when another body sits within 10 m ahead of the agent and roughly in
// its corridor.
bool reactive_blocked(const AgentState& self, const Vec2& other, double other_back) {
  Vec2 local = self.pose.to_local(other);
  double ahead = local.x - self.half_extents.x - other_back;
  return ahead > -1.0 && ahead < 10.0 && std::abs(local.y) < 2.0;
}

void advance_agents(WorldState& w, double h) {
  const ScenarioSpec& spec = *w.spec;
  for (std::size_t i = 0; i < w.agents.size(); ++i) {
    const AgentScript& script = spec.agents[i];
    AgentState& a = w.agents[i];
    if (script.behavior == AgentBehavior::Static || !w.agent_paths[i]) {
      a.speed = 0.0;
      continue;
    }
    double v = scheduled_speed(script, w.t);
    if (script.behavior == AgentBehavior::Reactive && v > 0.0) {
      if (reactive_blocked(a, w.ego.pose.pos, kEgoHalfLen)) v = 0.0;
      for (std::size_t k = 0; k < w.agents.size() && v > 0.0; ++k) {
        if (k != i && reactive_blocked(a, w.agents[k].pose.pos, w.agents[k].half_extents.x))
          v = 0.0;
      }
    }
    a.speed = v;
    const Polyline& path = *w.agent_paths[i];
    a.path_s = std::min(a.path_s + v * h, path.length());
    a.pose.pos = path.point_at(a.path_s);
    a.pose.heading = path.heading_at(a.path_s);
  }
}

struct TrackingPlan {
  std::vector<Vec2> world_path;  // traj path transformed to the world frame
  double target_speed = 0.0;
};

TrackingPlan make_plan(const WorldState& w, const Trajectory& traj) {
  TrackingPlan plan;
  plan.world_path.reserve(kPathWaypoints + 1);
  plan.world_path.push_back(w.ego.pose.pos);
  for (const Vec2& p : traj.path) plan.world_path.push_back(w.ego.pose.to_world(p));
  plan.target_speed = traj.implied_speed();
  return plan;
}

// Pure pursuit: steer toward the point where the path crosses the lookahead
// circle around the current position.
double pursuit_steer(const EgoState& ego, const std::vector<Vec2>& path) {
  Vec2 target = path.back();
  bool found = false;
  for (std::size_t i = 0; i + 1 < path.size() && !found; ++i) {
    Vec2 a = path[i], b = path[i + 1];
    Vec2 ab = b - a;
    double A = ab.dot(ab);
    if (A <= 0.0) continue;
    Vec2 ac = a - ego.pose.pos;
    double B = 2.0 * ab.dot(ac);
    double C = ac.dot(ac) - kLookahead * kLookahead;
    double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) continue;
    double u = (-B + std::sqrt(disc)) / (2.0 * A);
    if (u < 0.0 || u > 1.0) continue;
    Vec2 cand = a + ab * u;
    // Accept only forward crossings.
    if (ego.pose.to_local(cand).x > 0.0) {
      target = cand;
      found = true;
    }
  }
  Vec2 local = ego.pose.to_local(target);
  double dist = std::max(local.norm(), 1e-9);
  double alpha = std::atan2(local.y, local.x);
  double steer = std::atan2(2.0 * kWheelbase * std::sin(alpha), dist);
  return std::clamp(steer, -0.7, 0.7);
}

void integrate_ego(EgoState& ego, double steer, double target_speed, double h) {
  double accel = std::clamp(kSpeedGain * (target_speed - ego.speed), -4.5, 3.0);
  double v = ego.speed;
  ego.pose.pos.x += v * std::cos(ego.pose.heading) * h;
  ego.pose.pos.y += v * std::sin(ego.pose.heading) * h;
  ego.pose.heading = wrap_angle(ego.pose.heading + v * std::tan(steer) / kWheelbase * h);
  ego.speed = std::max(0.0, v + accel * h);
}

void update_control_tracking(WorldState& w) {
  for (ControlState& c : w.controls) {
    bool inside = c.region.contains(w.ego.pose.pos);
    if (inside) {
      c.min_speed_inside = std::min(c.min_speed_inside, w.ego.speed);
      if (c.kind == ControlKind::StopSign && c.min_speed_inside < kStopComplianceSpeed)
        c.satisfied = true;
    }
  }
}

void commit_control_flags(WorldState& w) {
  for (ControlState& c : w.controls) {
    bool inside = c.region.contains(w.ego.pose.pos);
    if (c.was_inside && !inside) {
      // Leaving a stop region without a compliant stop is the violation; the
      // flag also closes the region so it cannot fire twice.
      c.satisfied = true;
    }
    c.was_inside = inside;
  }
}

bool destination_reached(const WorldState& w) {
  const Polyline& route = *w.route;
  Polyline::Projection proj = route.project(w.ego.pose.pos);
  double remaining = route.length() - proj.s;
  double corridor = corridor_halfwidth(*w.spec, proj.lateral >= 0.0 ? 1 : -1);
  return remaining <= kGoalTolerance && std::abs(proj.lateral) <= corridor;
}

}  // namespace

std::vector<PenaltyEvent> detect_penalties(const WorldState& w) {
  std::vector<PenaltyEvent> events;
  Obb ego_box{w.ego.pose.pos, w.ego.pose.heading, kEgoHalfLen, kEgoHalfWid};
  for (const AgentState& a : w.agents) {
    Obb box{a.pose.pos, a.pose.heading, a.half_extents.x, a.half_extents.y};
    if (obb_overlap(ego_box, box)) {
      events.push_back({PenaltyKind::Collision, w.t});
      break;
    }
  }
  for (const ControlState& c : w.controls) {
    bool inside = c.region.contains(w.ego.pose.pos);
    if (c.kind == ControlKind::RedLight && inside && w.t < c.green_at) {
      events.push_back({PenaltyKind::RedLight, w.t});
    }
    if (c.kind == ControlKind::StopSign && c.was_inside && !inside && !c.satisfied &&
        c.min_speed_inside >= kStopComplianceSpeed) {
      events.push_back({PenaltyKind::StopSignViolation, w.t});
    }
  }
  Polyline::Projection proj = w.route->project(w.ego.pose.pos);
  double corridor = corridor_halfwidth(*w.spec, proj.lateral >= 0.0 ? 1 : -1);
  if (std::abs(proj.lateral) > kRouteDeviationLimit || std::abs(proj.lateral) > corridor) {
    events.push_back({PenaltyKind::RouteDeviation, w.t});
  }
  return events;
}

double route_progress(const WorldState& w) {
  const Polyline& route = *w.route;
  double len = route.length();
  if (len <= 0.0) return 0.0;
  double frac = route.project(w.ego.pose.pos).s / len;
  return std::clamp(std::max(frac, w.progress_max), 0.0, 1.0);
}

StepResult step(const WorldState& world, const Trajectory& traj, double dt,
                const SimOptions& options) {
  if (dt <= 0.0) throw ArgumentError("step: dt must be > 0");
  if (!trajectory_valid(traj, 1e9))  // finiteness only; spacing checked elsewhere
    throw NumericError("step: trajectory contains non-finite waypoints");

  StepResult result;
  result.world = world;
  WorldState& w = result.world;

  TrackingPlan plan = make_plan(w, traj);
  int substeps = std::max(1, static_cast<int>(std::ceil(dt / kSubstepDt - 1e-9)));
  double h = dt / substeps;

  for (int k = 0; k < substeps; ++k) {
    double steer = pursuit_steer(w.ego, plan.world_path);
    integrate_ego(w.ego, steer, plan.target_speed, h);
    advance_agents(w, h);
    w.t += h;
    update_control_tracking(w);
    w.progress_max = route_progress(w);

    std::vector<PenaltyEvent> all = detect_penalties(w);
    commit_control_flags(w);
    for (const PenaltyEvent& e : all) {
      if (options.penalty_mask & penalty_bit(e.kind)) {
        result.events.push_back(e);
      } else {
        result.masked_events.push_back(e);
      }
    }
    result.reached_destination = destination_reached(w);
    result.timed_out = w.t + 1e-12 >= w.spec->time_limit;
    if (!result.events.empty() || result.reached_destination || result.timed_out) break;
  }

  if (result.reached_destination) w.progress_max = 1.0;
  w.step_index += 1;
  result.done =
      result.reached_destination || result.timed_out || !result.events.empty();
  if (!result.events.empty()) {
    result.reward = -1;
  } else if (result.reached_destination) {
    result.reward = +1;
  } else {
    result.reward = 0;
  }
  return result;
}

std::string trace_record(const WorldState& w, const std::vector<PenaltyEvent>& events) {
  std::ostringstream os;
  os.precision(17);
  os << "{\"t\":" << w.t << ",\"x\":" << w.ego.pose.pos.x << ",\"y\":" << w.ego.pose.pos.y
     << ",\"heading\":" << w.ego.pose.heading << ",\"speed\":" << w.ego.speed
     << ",\"events\":[";
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i) os << ",";
    os << "\"" << to_string(events[i].kind) << "\"";
  }
  os << "]}";
  return os.str();
}

}  // namespace driveloop
