#include <doctest.h>

#include <cmath>

#include "driveloop/encoder.hpp"

using namespace driveloop;

namespace {

ScenarioSpec scene_spec() {
  ScenarioSpec s;
  s.id = "enc";
  s.category = ScenarioCategory::GiveWay;
  s.route = {{0, 0}, {100, 0}};
  s.lane_width = 3.5;
  s.time_limit = 50.0;
  s.ego_start = {{0, 0}, 0.0};
  AgentScript a;
  a.start = {{20.0, 3.0}, M_PI / 2};
  a.behavior = AgentBehavior::Static;
  s.agents.push_back(a);
  TrafficControl c;
  c.kind = ControlKind::StopSign;
  c.pose = {{40.0, 0.0}, 0.0};
  s.controls.push_back(c);
  return s;
}

}  // namespace

TEST_CASE("stationary ego in an empty scene") {
  ScenarioSpec s = scene_spec();
  s.agents.clear();
  s.controls.clear();
  WorldState w = load_scenario(s, 0);
  StateEmbedding e = encode(w);
  CHECK(e.values[0] == 0.0);  // speed
  for (int slot = 0; slot < 6; ++slot) {
    for (int k = 0; k < 6; ++k) CHECK(e.values[8 + slot * 6 + k] == 0.0);
  }
  CHECK(e.values[48] == 0.0);  // no active control
  CHECK(e.values[49] == doctest::Approx(1.0));
  CHECK(e.values[50] == doctest::Approx(1.0));
  for (int i = 51; i < kEmbedDim; ++i) CHECK(e.values[i] == 0.0);
}

TEST_CASE("encode is deterministic") {
  WorldState w = load_scenario(scene_spec(), 3);
  StateEmbedding a = encode(w);
  StateEmbedding b = encode(w);
  for (int i = 0; i < kEmbedDim; ++i) CHECK(a.values[i] == b.values[i]);
}

TEST_CASE("whole-scene translation leaves the embedding unchanged") {
  ScenarioSpec s = scene_spec();
  WorldState w = load_scenario(s, 3);
  w.ego.speed = 4.0;

  ScenarioSpec shifted = s;
  const Vec2 d{100.0, 100.0};
  for (Vec2& p : shifted.route) p += d;
  shifted.ego_start.pos += d;
  for (AgentScript& a : shifted.agents) {
    a.start.pos += d;
    for (Vec2& p : a.path) p += d;
  }
  for (TrafficControl& c : shifted.controls) c.pose.pos += d;
  WorldState w2 = load_scenario(shifted, 3);
  w2.ego.speed = 4.0;

  StateEmbedding a = encode(w);
  StateEmbedding b = encode(w2);
  for (int i = 0; i < kEmbedDim; ++i) {
    CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-12));
  }
}

TEST_CASE("agent features are ego-relative and populated") {
  WorldState w = load_scenario(scene_spec(), 3);
  w.ego.pose.pos = {10.0, 0.0};
  StateEmbedding e = encode(w);
  CHECK(e.values[8] == doctest::Approx(10.0 / 50.0));  // dx
  CHECK(e.values[9] == doctest::Approx(3.0 / 50.0));   // dy
  CHECK(e.values[10] == doctest::Approx(1.0));         // sin(pi/2)
  CHECK(e.values[13] == 1.0);                          // present
  // Stop sign 30 m ahead, active.
  CHECK(e.values[44] == doctest::Approx(30.0 / 50.0));
  CHECK(e.values[46] == 1.0);
  CHECK(e.values[48] == 1.0);
}

TEST_CASE("output dimension is fixed") {
  WorldState w = load_scenario(scene_spec(), 3);
  StateEmbedding e = encode(w);
  CHECK(e.values.size() == static_cast<std::size_t>(kEmbedDim));
  CHECK(!embedding_schema().empty());
}
