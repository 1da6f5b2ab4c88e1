#include "driveloop/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "driveloop/error.hpp"

namespace driveloop {

using nlohmann::json;

std::string_view to_string(ScenarioCategory c) {
  switch (c) {
    case ScenarioCategory::Merging: return "Merging";
    case ScenarioCategory::Overtaking: return "Overtaking";
    case ScenarioCategory::EmergencyBrake: return "EmergencyBrake";
    case ScenarioCategory::GiveWay: return "GiveWay";
    case ScenarioCategory::TrafficSign: return "TrafficSign";
  }
  return "TrafficSign";
}

ScenarioCategory category_from_string(std::string_view s) {
  if (s == "Merging") return ScenarioCategory::Merging;
  if (s == "Overtaking") return ScenarioCategory::Overtaking;
  if (s == "EmergencyBrake") return ScenarioCategory::EmergencyBrake;
  if (s == "GiveWay") return ScenarioCategory::GiveWay;
  if (s == "TrafficSign") return ScenarioCategory::TrafficSign;
  throw ValidationError("category", "unknown category: " + std::string(s));
}

std::string_view to_string(ControlKind k) {
  switch (k) {
    case ControlKind::RedLight: return "RedLight";
    case ControlKind::GreenLight: return "GreenLight";
    case ControlKind::StopSign: return "StopSign";
  }
  return "StopSign";
}

ControlKind control_kind_from_string(std::string_view s) {
  if (s == "RedLight") return ControlKind::RedLight;
  if (s == "GreenLight") return ControlKind::GreenLight;
  if (s == "StopSign") return ControlKind::StopSign;
  throw ValidationError("controls.kind", "unknown control kind: " + std::string(s));
}

namespace {

std::string_view behavior_name(AgentBehavior b) {
  switch (b) {
    case AgentBehavior::Static: return "static";
    case AgentBehavior::Script: return "script";
    case AgentBehavior::Reactive: return "reactive";
  }
  return "static";
}

AgentBehavior behavior_from_string(std::string_view s) {
  if (s == "static") return AgentBehavior::Static;
  if (s == "script") return AgentBehavior::Script;
  if (s == "reactive") return AgentBehavior::Reactive;
  throw ValidationError("agents.behavior", "unknown behavior: " + std::string(s));
}

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key()))
      throw ValidationError(where + "." + it.key(), "unknown field '" + it.key() +
                                "' in " + where);
  }
}

json pose_to_json(const Pose& p) {
  return json{{"x", p.pos.x}, {"y", p.pos.y}, {"heading", p.heading}};
}

Pose pose_from_json(const json& j, const std::string& where) {
  reject_unknown(j, {"x", "y", "heading"}, where);
  Pose p;
  p.pos.x = j.at("x").get<double>();
  p.pos.y = j.at("y").get<double>();
  p.heading = j.value("heading", 0.0);
  return p;
}

std::vector<Vec2> points_from_json(const json& j) {
  std::vector<Vec2> pts;
  for (const auto& e : j) pts.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
  return pts;
}

json points_to_json(const std::vector<Vec2>& pts) {
  json arr = json::array();
  for (const Vec2& p : pts) arr.push_back(json::array({p.x, p.y}));
  return arr;
}

}  // namespace

void validate_scenario(const ScenarioSpec& spec) {
  if (spec.id.empty()) throw ValidationError("id", "scenario id must be nonempty");
  if (spec.route.size() < 2)
    throw ValidationError("route", "route needs at least 2 points");
  Polyline route(spec.route);
  if (route.length() < 20.0)
    throw ValidationError("route", "route length must be >= 20 m");
  if (spec.time_limit <= 0.0)
    throw ValidationError("time_limit", "time_limit must be > 0");
  if (spec.lane_width <= 0.0)
    throw ValidationError("lane_width", "lane_width must be > 0");
  if (spec.lanes_left < 0 || spec.lanes_right < 0)
    throw ValidationError("lanes_left", "lane counts must be >= 0");
  for (const AgentScript& a : spec.agents) {
    if (a.behavior != AgentBehavior::Static && a.path.size() < 2)
      throw ValidationError("agents.path", "moving agent needs a path of >= 2 points");
    if (a.speed_profile.empty())
      throw ValidationError("agents.speed_profile", "speed profile must be nonempty");
    for (auto& [t, v] : a.speed_profile) {
      if (v < 0.0) throw ValidationError("agents.speed_profile", "speeds must be >= 0");
      (void)t;
    }
    if (a.half_extents.x <= 0.0 || a.half_extents.y <= 0.0)
      throw ValidationError("agents.half_extents", "half extents must be > 0");
  }
  for (const TrafficControl& c : spec.controls) {
    if (c.region_half_len <= 0.0 || c.region_half_wid <= 0.0)
      throw ValidationError("controls.region", "region extents must be > 0");
  }
}

ScenarioSpec scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError("", std::string("malformed scenario JSON: ") + e.what());
  }
  reject_unknown(j,
                 {"id", "category", "route", "lane_width", "lanes_left", "lanes_right",
                  "agents", "controls", "time_limit", "ego_start"},
                 "scenario");
  ScenarioSpec spec;
  try {
    spec.id = j.at("id").get<std::string>();
    spec.category = category_from_string(j.at("category").get<std::string>());
    spec.route = points_from_json(j.at("route"));
    spec.lane_width = j.at("lane_width").get<double>();
    spec.lanes_left = j.value("lanes_left", 0);
    spec.lanes_right = j.value("lanes_right", 0);
    spec.time_limit = j.at("time_limit").get<double>();
    spec.ego_start = pose_from_json(j.at("ego_start"), "ego_start");
    for (const auto& ja : j.value("agents", json::array())) {
      reject_unknown(ja, {"pose", "half_extents", "path", "speed_profile", "behavior"},
                     "agents");
      AgentScript a;
      a.start = pose_from_json(ja.at("pose"), "agents.pose");
      if (ja.contains("half_extents")) {
        a.half_extents = {ja["half_extents"].at(0).get<double>(),
                          ja["half_extents"].at(1).get<double>()};
      }
      if (ja.contains("path")) a.path = points_from_json(ja["path"]);
      if (ja.contains("speed_profile")) {
        a.speed_profile.clear();
        for (const auto& e : ja["speed_profile"]) {
          a.speed_profile.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
        }
      }
      a.behavior = behavior_from_string(ja.value("behavior", "static"));
      spec.agents.push_back(std::move(a));
    }
    for (const auto& jc : j.value("controls", json::array())) {
      reject_unknown(jc, {"kind", "pose", "region_half_len", "region_half_wid", "green_at"},
                     "controls");
      TrafficControl c;
      c.kind = control_kind_from_string(jc.at("kind").get<std::string>());
      c.pose = pose_from_json(jc.at("pose"), "controls.pose");
      c.region_half_len = jc.value("region_half_len", 3.0);
      c.region_half_wid = jc.value("region_half_wid", 5.0);
      c.green_at = jc.value("green_at", 0.0);
      spec.controls.push_back(c);
    }
  } catch (const json::exception& e) {
    throw ValidationError("", std::string("scenario field error: ") + e.what());
  }
  validate_scenario(spec);
  return spec;
}

std::string scenario_to_json(const ScenarioSpec& spec) {
  json j;
  j["id"] = spec.id;
  j["category"] = std::string(to_string(spec.category));
  j["route"] = points_to_json(spec.route);
  j["lane_width"] = spec.lane_width;
  j["lanes_left"] = spec.lanes_left;
  j["lanes_right"] = spec.lanes_right;
  j["time_limit"] = spec.time_limit;
  j["ego_start"] = pose_to_json(spec.ego_start);
  j["agents"] = json::array();
  for (const AgentScript& a : spec.agents) {
    json ja;
    ja["pose"] = pose_to_json(a.start);
    ja["half_extents"] = json::array({a.half_extents.x, a.half_extents.y});
    if (!a.path.empty()) ja["path"] = points_to_json(a.path);
    json prof = json::array();
    for (auto& [t, v] : a.speed_profile) prof.push_back(json::array({t, v}));
    ja["speed_profile"] = prof;
    ja["behavior"] = std::string(behavior_name(a.behavior));
    j["agents"].push_back(ja);
  }
  j["controls"] = json::array();
  for (const TrafficControl& c : spec.controls) {
    json jc;
    jc["kind"] = std::string(to_string(c.kind));
    jc["pose"] = pose_to_json(c.pose);
    jc["region_half_len"] = c.region_half_len;
    jc["region_half_wid"] = c.region_half_wid;
    jc["green_at"] = c.green_at;
    j["controls"].push_back(jc);
  }
  return j.dump(2);
}

ScenarioSpec load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("path", "cannot open scenario file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return scenario_from_json(ss.str());
}

void save_scenario_file(const ScenarioSpec& spec, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("path", "cannot write scenario file: " + path.string());
  out << scenario_to_json(spec) << "\n";
}

std::vector<ScenarioSpec> load_scenario_dir(const std::filesystem::path& dir) {
  std::vector<ScenarioSpec> specs;
  if (!std::filesystem::is_directory(dir))
    throw ValidationError("scenario_dir", "not a directory: " + dir.string());
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    if (entry.path().filename().string().ends_with("manifest.json")) continue;
    specs.push_back(load_scenario_file(entry.path()));
  }
  std::sort(specs.begin(), specs.end(),
            [](const ScenarioSpec& a, const ScenarioSpec& b) { return a.id < b.id; });
  return specs;
}

}  // namespace driveloop
