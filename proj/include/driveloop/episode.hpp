#pragma once

#include <functional>

#include "driveloop/action_expert.hpp"
#include "driveloop/encoder.hpp"
#include "driveloop/sim.hpp"

namespace driveloop {

// One decision tick: what was chosen and the policy-side quantities to log.
struct Decision {
  MetaAction action;
  Trajectory traj;
  double logprob = 0.0;
  double value = 0.0;
};

using DecisionFn = std::function<Decision(const WorldState&, const StateEmbedding&)>;

struct TickRecord {
  const WorldState* world_before;
  const StateEmbedding* emb;
  const Decision* decision;
  const StepResult* result;
};

struct EpisodeSummary {
  bool success = false;
  bool timed_out = false;
  std::vector<PenaltyEvent> events;         // terminal (enabled) events
  std::vector<PenaltyEvent> masked_events;  // all masked detections seen
  double completion = 0.0;                  // frozen route progress
  double duration = 0.0;                    // sim seconds
  int steps = 0;
  WorldState final_world;
};

// Closed-loop episode at the fixed decision cadence. The per-tick callback
// fires after every step; the episode ends on done or when the step cap is
// reached (cap <= 0 means run to the scenario time limit).
EpisodeSummary run_episode(const ScenarioSpec& spec, std::uint64_t seed,
                           const DecisionFn& decide, const SimOptions& options = {},
                           const std::function<void(const TickRecord&)>& on_tick = {},
                           int max_steps = 0);

}  // namespace driveloop
