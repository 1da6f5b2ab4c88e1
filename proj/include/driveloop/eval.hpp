#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "driveloop/policy.hpp"
#include "driveloop/rl_trainer.hpp"
#include "driveloop/rollout.hpp"
#include "driveloop/scenario.hpp"

namespace driveloop {

struct RouteResult {
  std::string scenario_id;
  ScenarioCategory category = ScenarioCategory::TrafficSign;
  double route_completion = 0.0;           // [0, 1]
  std::vector<PenaltyKind> infractions;    // multiset of kinds
  bool success = false;
  double duration = 0.0;
  double driving_score = 0.0;              // [0, 100]
  bool rollout_set = false;                // member of the RL route subset
  std::string diagnostic;                  // nonempty when the route errored
};

struct EvalReport {
  std::vector<RouteResult> routes;
  double ds = 0.0;            // mean driving score
  double sr = 0.0;            // percent of successful routes
  std::map<std::string, double> ability_means;  // category -> success %
  double mean_ability = 0.0;  // unweighted mean over categories present
  // Split aggregates over the rollout subset and the remaining routes;
  // absent when no subset was provided.
  std::optional<double> rollout_ds, rollout_sr, other_ds, other_sr;
};

// 100 * completion * product of per-infraction multipliers. Route deviation
// terminates the episode and freezes completion instead of multiplying.
double driving_score(double route_completion, std::span<const PenaltyKind> infractions);

struct EvalOptions {
  std::set<std::string> rollout_ids;  // for split reporting
  int workers = 4;
};

// One deterministic greedy (argmax via select_optimal) episode per route.
EvalReport evaluate(const PolicyParams& policy, const TrajectorySource& source,
                    const std::vector<ScenarioSpec>& routes, std::uint64_t seed,
                    const EvalOptions& options = {});

std::string report_to_json(const EvalReport& report);
void save_report(const EvalReport& report, const std::filesystem::path& json_path,
                 const std::filesystem::path& csv_path);

// ---- Ablation runners ----

struct AblationRow {
  std::string label;
  TrainerConfig cfg;
  PenaltyMask mask = kAllPenalties;
  double ds = 0.0;
  double sr = 0.0;
  std::map<std::string, double> ability_means;
  double mean_ability = 0.0;
  std::vector<RlEpochRow> training_rows;
  int masked_terminations = 0;  // training episodes ended by a masked kind: 0 by contract
};

struct AblationTable {
  std::string name;
  std::vector<AblationRow> rows;
};

struct AblationContext {
  PolicyParams il_policy;
  PolicyParams reference;
  const TrajectorySource* source;
  std::vector<ScenarioSpec> scenarios;  // training routes (already selected)
  std::vector<ScenarioSpec> eval_routes;
  TrainerConfig base_cfg;
  std::uint64_t seed = 0;
};

// Cumulative penalty sets: {}, {C}, {C,TL}, {C,TL,RD}, {C,TL,RD,S}.
AblationTable ablate_penalties(const AblationContext& ctx);
// One row per requested rollout-round count.
AblationTable ablate_rounds(const AblationContext& ctx, const std::vector<int>& rounds);
// PPO-Vanilla (beta 0), PPO-Entropy (beta 0, entropy 0.01), PPO-KL (default).
AblationTable ablate_regularization(const AblationContext& ctx);

std::string ablation_to_text(const AblationTable& table);
std::string ablation_to_json(const AblationTable& table);

}  // namespace driveloop
