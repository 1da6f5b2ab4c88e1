#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "driveloop/action_expert.hpp"
#include "driveloop/policy.hpp"
#include "driveloop/scenario.hpp"
#include "driveloop/trainer_config.hpp"

namespace driveloop {

struct Transition {
  StateEmbedding emb;
  MetaAction action;
  double logprob = 0.0;  // under the collection-time policy snapshot
  double value = 0.0;
  int reward = 0;        // {-1, 0, +1}
  bool done = false;
  std::string scenario_id;
};

struct Episode {
  std::string scenario_id;
  int round = 0;
  std::vector<Transition> transitions;
  bool truncated_by_time = false;
  double bootstrap_value = 0.0;             // V(s_T) when truncated, else 0
  std::vector<PenaltyKind> terminal_events; // enabled penalties that ended it
};

struct RolloutBuffer {
  std::vector<Episode> episodes;
  int round_index = 0;

  std::size_t transition_count() const {
    std::size_t n = 0;
    for (const Episode& e : episodes) n += e.transitions.size();
    return n;
  }
};

// Parallel on-policy collection: every (scenario, round) episode is an
// independent task with a seed derived from (seed, scenario id, round), so the
// merged buffer is identical for any worker count. Actions are sampled;
// logprob and value are recorded before any update. Worker failures discard
// the whole buffer and surface the offending scenario id.
RolloutBuffer collect(const PolicyParams& policy, const TrajectorySource& source,
                      const std::vector<ScenarioSpec>& scenarios,
                      const TrainerConfig& cfg, std::uint64_t seed,
                      PenaltyMask penalty_mask = kAllPenalties);

// Pre-pass selecting the RL route set: a route qualifies when the policy fails
// it at least once in `attempts` sampled episodes.
std::vector<std::string> failed_routes(const PolicyParams& policy,
                                       const TrajectorySource& source,
                                       const std::vector<ScenarioSpec>& scenarios,
                                       int attempts, int workers, std::uint64_t seed);

void save_buffer(const RolloutBuffer& buffer, const std::filesystem::path& path);
RolloutBuffer load_buffer(const std::filesystem::path& path);

}  // namespace driveloop
