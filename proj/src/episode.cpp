#include "driveloop/episode.hpp"

namespace driveloop {

EpisodeSummary run_episode(const ScenarioSpec& spec, std::uint64_t seed,
                           const DecisionFn& decide, const SimOptions& options,
                           const std::function<void(const TickRecord&)>& on_tick,
                           int max_steps) {
  WorldState world = load_scenario(spec, seed);
  EpisodeSummary summary;
  while (true) {
    StateEmbedding emb = encode(world);
    Decision decision = decide(world, emb);
    StepResult result = step(world, decision.traj, kDecisionDt, options);
    summary.steps += 1;
    summary.masked_events.insert(summary.masked_events.end(),
                                 result.masked_events.begin(),
                                 result.masked_events.end());
    if (on_tick) {
      TickRecord rec{&world, &emb, &decision, &result};
      on_tick(rec);
    }
    bool step_cap = max_steps > 0 && summary.steps >= max_steps;
    if (result.done || step_cap) {
      summary.success = result.reached_destination && result.events.empty();
      summary.timed_out = result.timed_out || (step_cap && !result.done);
      summary.events = result.events;
      summary.completion = route_progress(result.world);
      summary.duration = result.world.t;
      summary.final_world = std::move(result.world);
      return summary;
    }
    world = std::move(result.world);
  }
}

}  // namespace driveloop
