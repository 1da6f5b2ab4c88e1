#include "driveloop/expert.hpp"

#include <algorithm>
#include <cmath>

#include "driveloop/action_expert.hpp"

namespace driveloop {

namespace {

struct ControlAhead {
  const ControlState* control = nullptr;
  double dist = 1e18;  // along-route distance to region entry edge
  bool inside = false;
};

ControlAhead active_control_ahead(const WorldState& w, double ego_s) {
  ControlAhead best;
  for (const ControlState& c : w.controls) {
    bool active = (c.kind == ControlKind::RedLight && w.t < c.green_at) ||
                  (c.kind == ControlKind::StopSign && !c.satisfied);
    if (!active) continue;
    double s_c = w.route->project(c.region.pose.pos).s;
    double entry = s_c - c.region.half_len - ego_s;
    bool inside = c.region.contains(w.ego.pose.pos);
    if (!inside && entry < -1.0) continue;  // behind us
    if (entry < best.dist) {
      best.control = &c;
      best.dist = entry;
      best.inside = inside;
    }
  }
  return best;
}

struct LeadInfo {
  bool present = false;
  double gap = 1e18;    // bumper-to-bumper along the route
  double speed = 0.0;   // lead speed along its own heading
};

LeadInfo lead_agent(const WorldState& w, double ego_s) {
  LeadInfo lead;
  const Polyline& route = *w.route;
  for (const AgentState& a : w.agents) {
    Polyline::Projection proj = route.project(a.pose.pos);
    double ds = proj.s - ego_s;
    if (ds <= 0.0 || ds > 60.0) continue;
    if (std::abs(proj.lateral) > 0.75 * w.spec->lane_width) continue;
    double gap = ds - kEgoHalfLen - a.half_extents.x;
    if (gap < lead.gap) {
      lead.present = true;
      lead.gap = gap;
      lead.speed = a.speed;
    }
  }
  return lead;
}

// Crossing traffic: a moving agent off the corridor now but whose position is
// near the route ahead (conflict zone), as in give-way situations.
bool crossing_hazard(const WorldState& w, double ego_s) {
  const Polyline& route = *w.route;
  for (const AgentState& a : w.agents) {
    if (a.speed < 0.3) continue;
    Polyline::Projection proj = route.project(a.pose.pos);
    double ds = proj.s - ego_s;
    if (ds < 2.0 || ds > 28.0) continue;
    double lat = std::abs(proj.lateral);
    if (lat > 0.75 * w.spec->lane_width && lat < 14.0) {
      // Moving roughly toward the route?
      Vec2 to_route = route.point_at(proj.s) - a.pose.pos;
      Vec2 vel{std::cos(a.pose.heading), std::sin(a.pose.heading)};
      if (vel.dot(to_route) > 0.0) return true;
    }
  }
  return false;
}

}  // namespace

MetaAction expert_label(const WorldState& w) {
  const Polyline& route = *w.route;
  Polyline::Projection proj = route.project(w.ego.pose.pos);
  double v = w.ego.speed;
  const double lane_w = w.spec->lane_width;

  // ---- Path ----
  PathAction path;
  if (proj.lateral > 0.6 * lane_w) {
    path = PathAction::ChangeLaneRight;  // route is to our right
  } else if (proj.lateral < -0.6 * lane_w) {
    path = PathAction::ChangeLaneLeft;
  } else {
    double h0 = route.heading_at(proj.s);
    double h1 = route.heading_at(std::min(proj.s + 12.0, route.length()));
    double dh = wrap_angle(h1 - h0);
    if (dh > 0.30) {
      path = PathAction::TurnLeft;
    } else if (dh < -0.30) {
      path = PathAction::TurnRight;
    } else {
      path = PathAction::LaneFollow;
    }
  }

  // ---- Speed ----
  ControlAhead ctrl = active_control_ahead(w, proj.s);
  LeadInfo lead = lead_agent(w, proj.s);

  SpeedAction speed;
  double brake_dist = std::max(6.0, v * v / (2.0 * 1.8));
  if (ctrl.control && ctrl.control->kind == ControlKind::StopSign) {
    if (ctrl.inside) {
      speed = SpeedAction::Stop;  // come to rest inside the region
    } else if (ctrl.dist < brake_dist) {
      speed = v > kSlowSpeed + 0.5 ? SpeedAction::SlowDown : SpeedAction::MaintainSlowSpeed;
    } else if (ctrl.dist < 30.0) {
      speed = SpeedAction::SlowDown;
    } else {
      speed = SpeedAction::MaintainModerateSpeed;
    }
  } else if (ctrl.control && (ctrl.inside || ctrl.dist < brake_dist)) {
    speed = SpeedAction::Stop;
  } else if (ctrl.control && ctrl.dist < 30.0) {
    speed = SpeedAction::SlowDown;
  } else if (lead.present) {
    double closing = v - lead.speed;
    double ttc = closing > 0.0 ? lead.gap / closing : 1e18;
    if (ttc < 2.0 || lead.gap < 4.0) {
      speed = SpeedAction::SlowdownRapidly;
    } else if (lead.gap < 12.0) {
      speed = SpeedAction::SlowDown;
    } else if (lead.gap < 22.0 && closing > 0.5) {
      speed = SpeedAction::MaintainSlowSpeed;
    } else if (v < 3.0) {
      speed = SpeedAction::SpeedUp;
    } else {
      speed = SpeedAction::MaintainModerateSpeed;
    }
  } else if (crossing_hazard(w, proj.s)) {
    speed = v > 2.5 ? SpeedAction::SlowdownRapidly : SpeedAction::Stop;
  } else if (std::abs(route.curvature_at(proj.s + 4.0, 8.0)) > 0.06) {
    speed = SpeedAction::MaintainSlowSpeed;
  } else if (v < 3.0) {
    speed = SpeedAction::SpeedUp;
  } else {
    speed = SpeedAction::MaintainModerateSpeed;
  }

  return {speed, path};
}

}  // namespace driveloop
