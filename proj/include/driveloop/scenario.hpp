#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "driveloop/geometry.hpp"

namespace driveloop {

enum class ScenarioCategory {
  Merging,
  Overtaking,
  EmergencyBrake,
  GiveWay,
  TrafficSign,
};

std::string_view to_string(ScenarioCategory c);
ScenarioCategory category_from_string(std::string_view s);

enum class AgentBehavior {
  Static,    // never moves
  Script,    // follows its path at the scheduled speed
  Reactive,  // Script plus braking when blocked ahead
};

// One scripted traffic participant. Speed is a piecewise-constant schedule:
// entry (t, v) applies from time t until the next entry.
struct AgentScript {
  Pose start;
  Vec2 half_extents{2.4, 1.0};
  std::vector<Vec2> path;  // empty for Static
  std::vector<std::pair<double, double>> speed_profile{{0.0, 0.0}};
  AgentBehavior behavior = AgentBehavior::Static;
};

enum class ControlKind { RedLight, GreenLight, StopSign };

std::string_view to_string(ControlKind k);
ControlKind control_kind_from_string(std::string_view s);

struct TrafficControl {
  ControlKind kind = ControlKind::StopSign;
  Pose pose;                 // region center
  double region_half_len = 3.0;
  double region_half_wid = 5.0;
  double green_at = 0.0;     // lights only: red before, green after
};

// A complete scenario definition; one per file. The route polyline is the
// centerline of the ego's nominal lane; lanes_left/lanes_right count the
// additional lanes available on each side.
struct ScenarioSpec {
  std::string id;
  ScenarioCategory category = ScenarioCategory::TrafficSign;
  std::vector<Vec2> route;
  double lane_width = 3.5;
  int lanes_left = 0;
  int lanes_right = 0;
  std::vector<AgentScript> agents;
  std::vector<TrafficControl> controls;
  double time_limit = 0.0;
  Pose ego_start;
};

// Throws ValidationError naming the offending field.
void validate_scenario(const ScenarioSpec& spec);

ScenarioSpec scenario_from_json(const std::string& text);
std::string scenario_to_json(const ScenarioSpec& spec);

ScenarioSpec load_scenario_file(const std::filesystem::path& path);
void save_scenario_file(const ScenarioSpec& spec, const std::filesystem::path& path);

// All *.json scenarios in a directory, sorted by id.
std::vector<ScenarioSpec> load_scenario_dir(const std::filesystem::path& dir);

// The bundled starter pack: deterministic, >= 2 scenarios per category.
std::vector<ScenarioSpec> starter_pack();

}  // namespace driveloop
