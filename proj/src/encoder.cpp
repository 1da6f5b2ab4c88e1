#include "driveloop/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace driveloop {

namespace {
constexpr int kAgentSlots = 6;
constexpr int kAgentFeatures = 6;
constexpr double kDistScale = 1.0 / 50.0;
constexpr double kSpeedScale = 1.0 / 10.0;
}  // namespace

std::string_view embedding_schema() {
  return "driveloop/emb/v1 d=64 "
         "[speed/10, heading_err, lat/50, curv5x@{2,5,10,15,20}, "
         "agents6x(dx/50,dy/50,sin,cos,v/10,present), "
         "ctrl(dist/50,red,stop,inside,present), rem_route, rem_time, pad13]";
}

StateEmbedding encode(const WorldState& w) {
  StateEmbedding emb;
  emb.frame_t = w.t;
  auto& f = emb.values;

  const Polyline& route = *w.route;
  Polyline::Projection proj = route.project(w.ego.pose.pos);

  f[0] = w.ego.speed * kSpeedScale;
  f[1] = wrap_angle(route.heading_at(proj.s) - w.ego.pose.heading);
  f[2] = proj.lateral * kDistScale;

  const double lookaheads[5] = {2.0, 5.0, 10.0, 15.0, 20.0};
  for (int i = 0; i < 5; ++i) {
    f[3 + i] = route.curvature_at(proj.s + lookaheads[i]) * 5.0;
  }

  // K nearest agents by Euclidean distance, ties by index.
  std::vector<std::size_t> order(w.agents.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    double da = (w.agents[a].pose.pos - w.ego.pose.pos).norm();
    double db = (w.agents[b].pose.pos - w.ego.pose.pos).norm();
    if (da != db) return da < db;
    return a < b;
  });
  for (int slot = 0; slot < kAgentSlots; ++slot) {
    int base = 8 + slot * kAgentFeatures;
    if (static_cast<std::size_t>(slot) >= order.size()) continue;  // zero padded
    const AgentState& a = w.agents[order[slot]];
    Vec2 rel = w.ego.pose.to_local(a.pose.pos);
    double dh = wrap_angle(a.pose.heading - w.ego.pose.heading);
    f[base + 0] = rel.x * kDistScale;
    f[base + 1] = rel.y * kDistScale;
    f[base + 2] = std::sin(dh);
    f[base + 3] = std::cos(dh);
    f[base + 4] = a.speed * kSpeedScale;
    f[base + 5] = 1.0;
  }

  // Nearest active control ahead along the route. Active: a light that is
  // still red, or a stop region not yet satisfied.
  double best_dist = 1e18;
  const ControlState* best = nullptr;
  for (const ControlState& c : w.controls) {
    bool active = (c.kind == ControlKind::RedLight && w.t < c.green_at) ||
                  (c.kind == ControlKind::StopSign && !c.satisfied);
    if (!active) continue;
    double s_c = route.project(c.region.pose.pos).s;
    double d = s_c - proj.s;
    if (d < -c.region.half_len - 2.0) continue;  // already passed
    if (d < best_dist) {
      best_dist = d;
      best = &c;
    }
  }
  if (best) {
    f[44] = best_dist * kDistScale;
    f[45] = best->kind == ControlKind::RedLight ? 1.0 : 0.0;
    f[46] = best->kind == ControlKind::StopSign ? 1.0 : 0.0;
    f[47] = best->region.contains(w.ego.pose.pos) ? 1.0 : 0.0;
    f[48] = 1.0;
  }

  f[49] = 1.0 - route_progress(w);
  f[50] = std::max(0.0, 1.0 - w.t / w.spec->time_limit);
  // [51..63] reserved.
  return emb;
}

}  // namespace driveloop
