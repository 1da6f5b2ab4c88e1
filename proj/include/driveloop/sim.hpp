#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "driveloop/scenario.hpp"
#include "driveloop/trajectory.hpp"

namespace driveloop {

enum class PenaltyKind : std::uint8_t {
  Collision = 0,
  RedLight = 1,
  RouteDeviation = 2,
  StopSignViolation = 3,
};
std::string_view to_string(PenaltyKind k);

struct PenaltyEvent {
  PenaltyKind kind;
  double t;
  bool operator==(const PenaltyEvent&) const = default;
};

// Bit mask over PenaltyKind; disabled kinds neither terminate nor reward
// during training rollouts (they are still detected and reported).
using PenaltyMask = std::uint32_t;
inline constexpr PenaltyMask kAllPenalties = 0xF;
inline constexpr PenaltyMask penalty_bit(PenaltyKind k) {
  return 1u << static_cast<std::uint32_t>(k);
}

struct EgoState {
  Pose pose;
  double speed = 0.0;
};

struct AgentState {
  Pose pose;
  double speed = 0.0;
  Vec2 half_extents{2.4, 1.0};
  double path_s = 0.0;  // arc position along the agent's own path
};

struct ControlState {
  ControlKind kind;
  Region region;
  double green_at = 0.0;
  bool was_inside = false;        // ego inside at the previous substep
  double min_speed_inside = 1e9;  // min ego speed observed inside (stop signs)
  bool satisfied = false;         // stop completed inside the region
};

// Complete simulation state. Copyable; the scenario is shared immutable data.
struct WorldState {
  std::shared_ptr<const ScenarioSpec> spec;
  std::shared_ptr<const Polyline> route;
  std::vector<std::shared_ptr<const Polyline>> agent_paths;  // parallel to agents

  EgoState ego;
  std::vector<AgentState> agents;
  std::vector<ControlState> controls;
  double t = 0.0;
  int step_index = 0;
  double progress_max = 0.0;
  std::uint64_t seed = 0;
};

struct StepResult {
  WorldState world;
  std::vector<PenaltyEvent> events;         // enabled penalties this step
  std::vector<PenaltyEvent> masked_events;  // detected but disabled by the mask
  bool reached_destination = false;
  bool timed_out = false;
  bool done = false;
  int reward = 0;  // {-1, 0, +1}; nonzero only when done
};

struct SimOptions {
  PenaltyMask penalty_mask = kAllPenalties;
};

// Vehicle + controller constants (see README for the vehicle model).
inline constexpr double kWheelbase = 2.7;
inline constexpr double kSubstepDt = 0.1;
inline constexpr double kDecisionDt = 0.5;
inline constexpr double kLookahead = 4.0;
inline constexpr double kSpeedGain = 1.0;
inline constexpr double kEgoHalfLen = 2.4;
inline constexpr double kEgoHalfWid = 0.95;
inline constexpr double kStopComplianceSpeed = 0.1;
inline constexpr double kRouteDeviationLimit = 30.0;
inline constexpr double kGoalTolerance = 2.0;

WorldState load_scenario(const ScenarioSpec& spec, std::uint64_t seed);

StepResult step(const WorldState& world, const Trajectory& traj, double dt,
                const SimOptions& options = {});

// Pure predicate: all four penalty kinds, mask ignored.
std::vector<PenaltyEvent> detect_penalties(const WorldState& world);

// Fraction of route arc length covered (running maximum), in [0, 1].
double route_progress(const WorldState& world);

// Drivable corridor half-width on the given side (+1 left, -1 right).
double corridor_halfwidth(const ScenarioSpec& spec, int side);

// Line-delimited trace record (t, ego pose, events) for debugging.
std::string trace_record(const WorldState& world, const std::vector<PenaltyEvent>& events);

}  // namespace driveloop
