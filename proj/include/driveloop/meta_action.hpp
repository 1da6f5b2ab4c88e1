#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "driveloop/error.hpp"

namespace driveloop {

// Longitudinal decision. 7 values.
enum class SpeedAction : std::uint8_t {
  SpeedUp = 0,
  SlowDown,
  SlowdownRapidly,
  MaintainSlowSpeed,
  MaintainModerateSpeed,
  MaintainFastSpeed,
  Stop,
};

// Lateral decision. 6 values.
enum class PathAction : std::uint8_t {
  TurnLeft = 0,
  TurnRight,
  ChangeLaneLeft,
  ChangeLaneRight,
  Straight,
  LaneFollow,
};

inline constexpr int kNumSpeedActions = 7;
inline constexpr int kNumPathActions = 6;
inline constexpr int kNumJointActions = kNumSpeedActions * kNumPathActions;  // 42

// Joint (speed, path) decision; the discrete RL action.
struct MetaAction {
  SpeedAction speed = SpeedAction::MaintainModerateSpeed;
  PathAction path = PathAction::LaneFollow;

  // Joint index is speed-major: speed * 6 + path, in [0, 42).
  int joint_index() const {
    return static_cast<int>(speed) * kNumPathActions + static_cast<int>(path);
  }
  static MetaAction from_joint(int idx) {
    if (idx < 0 || idx >= kNumJointActions)
      throw ArgumentError("joint action index out of range");
    return {static_cast<SpeedAction>(idx / kNumPathActions),
            static_cast<PathAction>(idx % kNumPathActions)};
  }
  bool operator==(const MetaAction&) const = default;
};

inline constexpr std::array<std::string_view, kNumSpeedActions> kSpeedActionNames = {
    "SpeedUp",           "SlowDown",           "SlowdownRapidly", "MaintainSlowSpeed",
    "MaintainModerateSpeed", "MaintainFastSpeed", "Stop"};

inline constexpr std::array<std::string_view, kNumPathActions> kPathActionNames = {
    "TurnLeft", "TurnRight", "ChangeLaneLeft", "ChangeLaneRight", "Straight",
    "LaneFollow"};

std::string_view to_string(SpeedAction a);
std::string_view to_string(PathAction a);
SpeedAction speed_action_from_string(std::string_view s);
PathAction path_action_from_string(std::string_view s);

}  // namespace driveloop
