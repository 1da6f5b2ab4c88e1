#include "driveloop/meta_action.hpp"

namespace driveloop {

std::string_view to_string(SpeedAction a) {
  return kSpeedActionNames[static_cast<int>(a)];
}

std::string_view to_string(PathAction a) {
  return kPathActionNames[static_cast<int>(a)];
}

SpeedAction speed_action_from_string(std::string_view s) {
  for (int i = 0; i < kNumSpeedActions; ++i) {
    if (kSpeedActionNames[i] == s) return static_cast<SpeedAction>(i);
  }
  throw ValidationError("speed", "unknown speed action: " + std::string(s));
}

PathAction path_action_from_string(std::string_view s) {
  for (int i = 0; i < kNumPathActions; ++i) {
    if (kPathActionNames[i] == s) return static_cast<PathAction>(i);
  }
  throw ValidationError("path", "unknown path action: " + std::string(s));
}

}  // namespace driveloop
