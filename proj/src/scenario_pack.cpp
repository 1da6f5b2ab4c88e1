#include <cmath>
#include <string>

#include "driveloop/scenario.hpp"

namespace driveloop {

namespace {

std::vector<Vec2> straight_route(double length) {
  return {{0.0, 0.0}, {length, 0.0}};
}

// Straight segment, quarter turn of the given radius, then a tail segment.
std::vector<Vec2> turn_route(double approach, double radius, double tail, bool left) {
  std::vector<Vec2> pts;
  pts.push_back({0.0, 0.0});
  pts.push_back({approach, 0.0});
  int arcs = 16;
  double sign = left ? 1.0 : -1.0;
  for (int i = 1; i <= arcs; ++i) {
    double a = (M_PI / 2.0) * i / arcs;
    pts.push_back({approach + radius * std::sin(a), sign * radius * (1.0 - std::cos(a))});
  }
  Vec2 end = pts.back();
  pts.push_back({end.x, end.y + sign * tail});
  return pts;
}

// Lateral shift of `offset` between x0 and x1, back to the original lane
// between x2 and x3 (the overtaking geometry).
std::vector<Vec2> shift_route(double x0, double x1, double x2, double x3, double offset,
                              double length) {
  std::vector<Vec2> pts;
  pts.push_back({0.0, 0.0});
  auto blend = [&](double xa, double xb, double ya, double yb) {
    int n = 10;
    for (int i = 0; i <= n; ++i) {
      double u = static_cast<double>(i) / n;
      double s = 3.0 * u * u - 2.0 * u * u * u;
      pts.push_back({xa + (xb - xa) * u, ya + (yb - ya) * s});
    }
  };
  pts.push_back({x0, 0.0});
  blend(x0, x1, 0.0, offset);
  pts.push_back({x2, offset});
  blend(x2, x3, offset, 0.0);
  pts.push_back({length, 0.0});
  return pts;
}

AgentScript route_agent(Vec2 from, Vec2 to, std::vector<std::pair<double, double>> profile,
                        AgentBehavior behavior) {
  AgentScript a;
  a.start.pos = from;
  a.start.heading = std::atan2(to.y - from.y, to.x - from.x);
  a.path = {from, to};
  a.speed_profile = std::move(profile);
  a.behavior = behavior;
  return a;
}

AgentScript parked_agent(Vec2 at, double heading = 0.0) {
  AgentScript a;
  a.start.pos = at;
  a.start.heading = heading;
  a.behavior = AgentBehavior::Static;
  return a;
}

TrafficControl light(double x, double green_at, double y = 0.0) {
  TrafficControl c;
  c.kind = ControlKind::RedLight;
  c.pose = {{x, y}, 0.0};
  c.region_half_len = 3.0;
  c.region_half_wid = 5.0;
  c.green_at = green_at;
  return c;
}

TrafficControl stop_sign(double x, double y = 0.0) {
  TrafficControl c;
  c.kind = ControlKind::StopSign;
  c.pose = {{x, y}, 0.0};
  c.region_half_len = 4.0;
  c.region_half_wid = 5.0;
  return c;
}

ScenarioSpec base(const std::string& id, ScenarioCategory cat, std::vector<Vec2> route,
                  double time_limit, int lanes_left = 0, int lanes_right = 0) {
  ScenarioSpec s;
  s.id = id;
  s.category = cat;
  s.route = std::move(route);
  s.lane_width = 3.5;
  s.lanes_left = lanes_left;
  s.lanes_right = lanes_right;
  s.time_limit = time_limit;
  s.ego_start = {{0.0, 0.0}, 0.0};
  return s;
}

std::string vid(const std::string& stem, int v) { return stem + "_" + std::to_string(v); }

}  // namespace

std::vector<ScenarioSpec> starter_pack() {
  std::vector<ScenarioSpec> pack;
  constexpr int kVariants = 5;

  for (int v = 0; v < kVariants; ++v) {
    double dv = static_cast<double>(v);

    // ---- TrafficSign ----
    {
      ScenarioSpec s = base(vid("ts_red", v), ScenarioCategory::TrafficSign,
                            straight_route(150.0), 60.0);
      s.controls.push_back(light(65.0 + 6.0 * dv, 8.0 + 1.5 * dv));
      pack.push_back(s);
    }
    {
      ScenarioSpec s = base(vid("ts_stop", v), ScenarioCategory::TrafficSign,
                            straight_route(150.0), 70.0);
      s.controls.push_back(stop_sign(55.0 + 7.0 * dv));
      pack.push_back(s);
    }
    {
      ScenarioSpec s = base(vid("ts_two", v), ScenarioCategory::TrafficSign,
                            straight_route(170.0), 85.0);
      s.controls.push_back(light(45.0 + 4.0 * dv, 6.0 + dv));
      s.controls.push_back(stop_sign(105.0 + 5.0 * dv));
      pack.push_back(s);
    }
    {
      ScenarioSpec s = base(vid("ts_turnl", v), ScenarioCategory::TrafficSign,
                            turn_route(45.0 + 3.0 * dv, 12.0, 55.0, true), 75.0, 1, 1);
      s.controls.push_back(light(37.0 + 3.0 * dv, 7.0 + dv));
      pack.push_back(s);
    }
    {
      ScenarioSpec s = base(vid("ts_turnr", v), ScenarioCategory::TrafficSign,
                            turn_route(50.0 + 3.0 * dv, 12.0, 55.0, false), 80.0, 1, 1);
      s.controls.push_back(stop_sign(42.0 + 3.0 * dv));
      pack.push_back(s);
    }

    // ---- EmergencyBrake ----
    {
      ScenarioSpec s = base(vid("eb_basic", v), ScenarioCategory::EmergencyBrake,
                            straight_route(140.0), 60.0);
      double tb = 6.0 + 0.8 * dv;
      s.agents.push_back(route_agent({26.0 + 3.0 * dv, 0.0}, {140.0, 0.0},
                                     {{0.0, 5.0}, {tb, 0.0}, {tb + 6.0, 5.0}},
                                     AgentBehavior::Script));
      pack.push_back(s);
    }
    {
      ScenarioSpec s = base(vid("eb_hard", v), ScenarioCategory::EmergencyBrake,
                            straight_route(140.0), 60.0);
      double tb = 4.0 + 0.5 * dv;
      s.agents.push_back(route_agent({20.0 + 2.0 * dv, 0.0}, {140.0, 0.0},
                                     {{0.0, 6.0}, {tb, 0.0}, {tb + 8.0, 5.0}},
                                     AgentBehavior::Script));
      pack.push_back(s);
    }
    {
      ScenarioSpec s = base(vid("eb_stopgo", v), ScenarioCategory::EmergencyBrake,
                            straight_route(140.0), 75.0);
      double t1 = 5.0 + 0.5 * dv;
      s.agents.push_back(route_agent({28.0, 0.0}, {140.0, 0.0},
                                     {{0.0, 4.0},
                                      {t1, 0.0},
                                      {t1 + 6.0, 4.0},
                                      {t1 + 13.0, 0.0},
                                      {t1 + 19.0, 4.0}},
                                     AgentBehavior::Script));
      pack.push_back(s);
    }

    // ---- GiveWay ----
    {
      ScenarioSpec s = base(vid("gw_cross", v), ScenarioCategory::GiveWay,
                            straight_route(130.0), 65.0);
      double xc = 55.0 + 4.0 * dv;
      s.agents.push_back(route_agent({xc, 17.0}, {xc, -20.0},
                                     {{0.0, 0.0}, {4.0 + 0.7 * dv, 3.5 + 0.2 * dv}},
                                     AgentBehavior::Script));
      pack.push_back(s);
    }
    {
      ScenarioSpec s = base(vid("gw_cross2", v), ScenarioCategory::GiveWay,
                            straight_route(130.0), 65.0);
      double xc = 65.0 + 3.0 * dv;
      s.agents.push_back(route_agent({xc, -15.0}, {xc, 18.0},
                                     {{0.0, 0.0}, {5.0 + 0.5 * dv, 4.0}},
                                     AgentBehavior::Script));
      pack.push_back(s);
    }
    {
      ScenarioSpec s = base(vid("gw_double", v), ScenarioCategory::GiveWay,
                            straight_route(140.0), 75.0);
      double x1 = 60.0 + 3.0 * dv;
      double x2 = 78.0 + 3.0 * dv;
      s.agents.push_back(route_agent({x1, 16.0}, {x1, -18.0}, {{0.0, 0.0}, {4.0, 4.0}},
                                     AgentBehavior::Script));
      s.agents.push_back(route_agent({x2, -14.0}, {x2, 16.0}, {{0.0, 0.0}, {9.0, 4.0}},
                                     AgentBehavior::Script));
      pack.push_back(s);
    }

    // ---- Merging ----
    {
      ScenarioSpec s = base(vid("m_ramp", v), ScenarioCategory::Merging,
                            straight_route(130.0), 60.0, 0, 1);
      s.ego_start = {{0.0, -3.5}, 0.0};
      s.agents.push_back(route_agent({-16.0 - 3.0 * dv, 0.0}, {130.0, 0.0},
                                     {{0.0, 4.0 + 0.3 * dv}}, AgentBehavior::Reactive));
      pack.push_back(s);
    }
    {
      ScenarioSpec s = base(vid("m_ramp2", v), ScenarioCategory::Merging,
                            straight_route(130.0), 60.0, 1, 0);
      s.ego_start = {{0.0, 3.5}, 0.0};
      s.agents.push_back(route_agent({-24.0 - 2.0 * dv, 0.0}, {130.0, 0.0},
                                     {{0.0, 5.0}}, AgentBehavior::Reactive));
      pack.push_back(s);
    }
    {
      ScenarioSpec s = base(vid("m_bend", v), ScenarioCategory::Merging,
                            std::vector<Vec2>{{0.0, 0.0},
                                              {40.0, 0.0},
                                              {55.0, 1.0},
                                              {70.0, 3.5},
                                              {140.0, 3.5}},
                            65.0, 1, 1);
      s.agents.push_back(route_agent({-12.0 - 3.0 * dv, 3.5}, {140.0, 3.5},
                                     {{0.0, 4.2 + 0.2 * dv}}, AgentBehavior::Reactive));
      pack.push_back(s);
    }

    // ---- Overtaking ----
    {
      double x0 = 50.0 + 4.0 * dv;
      ScenarioSpec s = base(vid("o_parked", v), ScenarioCategory::Overtaking,
                            shift_route(x0 - 6.0, x0 + 10.0, x0 + 34.0, x0 + 50.0, 3.5,
                                        160.0),
                            70.0, 1, 1);
      s.agents.push_back(parked_agent({x0 + 22.0, 0.0}));
      pack.push_back(s);
    }
    {
      double x0 = 46.0 + 4.0 * dv;
      ScenarioSpec s = base(vid("o_slow", v), ScenarioCategory::Overtaking,
                            shift_route(x0 - 6.0, x0 + 10.0, x0 + 38.0, x0 + 54.0, 3.5,
                                        165.0),
                            75.0, 1, 1);
      s.agents.push_back(route_agent({x0 + 16.0, 0.0}, {x0 + 34.0, 0.0}, {{0.0, 1.0}},
                                     AgentBehavior::Script));
      pack.push_back(s);
    }
    {
      double x0 = 54.0 + 3.0 * dv;
      ScenarioSpec s = base(vid("o_pair", v), ScenarioCategory::Overtaking,
                            shift_route(x0 - 6.0, x0 + 10.0, x0 + 40.0, x0 + 56.0, 3.5,
                                        170.0),
                            75.0, 1, 1);
      s.agents.push_back(parked_agent({x0 + 20.0, 0.0}));
      s.agents.push_back(parked_agent({x0 + 30.0, 0.2}));
      pack.push_back(s);
    }
  }

  for (const ScenarioSpec& s : pack) validate_scenario(s);
  return pack;
}

}  // namespace driveloop
