#pragma once

#include "driveloop/meta_action.hpp"
#include "driveloop/sim.hpp"

namespace driveloop {

// Deterministic rule-based labeling of the correct meta-action for a world
// state. Drives dataset generation; the decision policy learns to imitate it
// from the state embedding alone.
//
// Path rule: steer back to the route lane when laterally displaced (lane
// change), classify upcoming heading change as a turn, otherwise lane-follow.
// Speed rule, by priority: stop for active controls, brake for imminent
// collisions (TTC) and blocked corridor, slow for crossing traffic and sharp
// curvature, otherwise cruise at moderate speed (speeding up from low speed).
MetaAction expert_label(const WorldState& world);

}  // namespace driveloop
