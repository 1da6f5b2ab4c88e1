#include "driveloop/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "driveloop/episode.hpp"
#include "driveloop/error.hpp"
#include "driveloop/rng.hpp"

namespace driveloop {

using nlohmann::json;

double driving_score(double route_completion, std::span<const PenaltyKind> infractions) {
  double score = 100.0 * std::clamp(route_completion, 0.0, 1.0);
  for (PenaltyKind kind : infractions) {
    switch (kind) {
      case PenaltyKind::Collision: score *= 0.60; break;
      case PenaltyKind::RedLight: score *= 0.70; break;
      case PenaltyKind::StopSignViolation: score *= 0.80; break;
      case PenaltyKind::RouteDeviation: break;  // terminates; completion frozen
    }
  }
  return score;
}

namespace {

RouteResult evaluate_route(const PolicyParams& policy, const TrajectorySource& source,
                           const ScenarioSpec& spec, std::uint64_t seed) {
  RouteResult rr;
  rr.scenario_id = spec.id;
  rr.category = spec.category;
  try {
    auto decide = [&](const WorldState& world, const StateEmbedding& emb) {
      PolicyForward f = policy_forward(policy, emb.values);
      CandidateSet cands = candidate_set(world, source, emb);
      const CandidateEntry& best = select_optimal(cands, f.dist);
      Decision d;
      d.action = best.meta;
      d.traj = best.traj;
      d.value = f.value;
      d.logprob = f.dist.logprob(best.meta);
      return d;
    };
    EpisodeSummary summary =
        run_episode(spec, derive_seed(seed, "eval", fnv1a64(spec.id)), decide);
    rr.success = summary.success;
    rr.duration = summary.duration;
    rr.route_completion = summary.success ? 1.0 : summary.completion;
    for (const PenaltyEvent& e : summary.events) rr.infractions.push_back(e.kind);
  } catch (const std::exception& e) {
    rr.success = false;
    rr.route_completion = 0.0;
    rr.diagnostic = e.what();
  }
  rr.driving_score = driving_score(rr.route_completion, rr.infractions);
  return rr;
}

}  // namespace

EvalReport evaluate(const PolicyParams& policy, const TrajectorySource& source,
                    const std::vector<ScenarioSpec>& routes, std::uint64_t seed,
                    const EvalOptions& options) {
  if (routes.empty()) throw ArgumentError("evaluate: empty route list");
  EvalReport report;
  report.routes.resize(routes.size());

  std::atomic<std::size_t> next{0};
  int workers = std::max(1, std::min<int>(options.workers, routes.size()));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= routes.size()) return;
        report.routes[i] = evaluate_route(policy, source, routes[i], seed);
      }
    });
  }
  for (std::thread& t : pool) t.join();

  std::map<std::string, std::pair<int, int>> per_cat;  // category -> (success, total)
  double ds_sum = 0.0;
  int successes = 0;
  for (RouteResult& rr : report.routes) {
    rr.rollout_set = options.rollout_ids.count(rr.scenario_id) > 0;
    ds_sum += rr.driving_score;
    successes += rr.success ? 1 : 0;
    auto& [ok, total] = per_cat[std::string(to_string(rr.category))];
    ok += rr.success ? 1 : 0;
    total += 1;
  }
  double n = static_cast<double>(report.routes.size());
  report.ds = ds_sum / n;
  report.sr = 100.0 * successes / n;
  double ability_sum = 0.0;
  for (auto& [cat, counts] : per_cat) {
    double pct = 100.0 * counts.first / std::max(1, counts.second);
    report.ability_means[cat] = pct;
    ability_sum += pct;
  }
  report.mean_ability =
      per_cat.empty() ? 0.0 : ability_sum / static_cast<double>(per_cat.size());

  if (!options.rollout_ids.empty()) {
    auto aggregate = [&](bool in_set, std::optional<double>& ds_out,
                         std::optional<double>& sr_out) {
      double ds = 0.0;
      int ok = 0, count = 0;
      for (const RouteResult& rr : report.routes) {
        if (rr.rollout_set != in_set) continue;
        ds += rr.driving_score;
        ok += rr.success ? 1 : 0;
        ++count;
      }
      if (count > 0) {
        ds_out = ds / count;
        sr_out = 100.0 * ok / count;
      }
    };
    aggregate(true, report.rollout_ds, report.rollout_sr);
    aggregate(false, report.other_ds, report.other_sr);
  }
  return report;
}

namespace {

json route_to_json(const RouteResult& rr) {
  json j;
  j["scenario_id"] = rr.scenario_id;
  j["category"] = std::string(to_string(rr.category));
  j["route_completion"] = rr.route_completion;
  j["infractions"] = json::array();
  for (PenaltyKind k : rr.infractions) j["infractions"].push_back(std::string(to_string(k)));
  j["success"] = rr.success;
  j["duration"] = rr.duration;
  j["driving_score"] = rr.driving_score;
  j["rollout_set"] = rr.rollout_set;
  if (!rr.diagnostic.empty()) j["diagnostic"] = rr.diagnostic;
  return j;
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
  json j;
  j["schema"] = "driveloop/report/v1";
  j["ds"] = report.ds;
  j["sr"] = report.sr;
  j["ability_means"] = report.ability_means;
  j["mean_ability"] = report.mean_ability;
  if (report.rollout_ds) {
    j["rollout_split"] = {{"rollout_ds", *report.rollout_ds},
                          {"rollout_sr", *report.rollout_sr}};
    if (report.other_ds) {
      j["rollout_split"]["other_ds"] = *report.other_ds;
      j["rollout_split"]["other_sr"] = *report.other_sr;
    }
  }
  j["routes"] = json::array();
  for (const RouteResult& rr : report.routes) j["routes"].push_back(route_to_json(rr));
  return j.dump(2);
}

void save_report(const EvalReport& report, const std::filesystem::path& json_path,
                 const std::filesystem::path& csv_path) {
  {
    std::ofstream out(json_path);
    if (!out) throw ValidationError("path", "cannot write report: " + json_path.string());
    out << report_to_json(report) << "\n";
  }
  std::ofstream csv(csv_path);
  if (!csv) throw ValidationError("path", "cannot write report csv: " + csv_path.string());
  csv << "scenario_id,category,route_completion,success,driving_score,duration,"
         "infractions,rollout_set\n";
  for (const RouteResult& rr : report.routes) {
    csv << rr.scenario_id << "," << to_string(rr.category) << "," << rr.route_completion
        << "," << (rr.success ? 1 : 0) << "," << rr.driving_score << "," << rr.duration
        << ",";
    for (std::size_t i = 0; i < rr.infractions.size(); ++i) {
      if (i) csv << "|";
      csv << to_string(rr.infractions[i]);
    }
    csv << "," << (rr.rollout_set ? 1 : 0) << "\n";
  }
}

namespace {

AblationRow run_variant(const AblationContext& ctx, const std::string& label,
                        const TrainerConfig& cfg, PenaltyMask mask) {
  AblationRow row;
  row.label = label;
  row.cfg = cfg;
  row.mask = mask;

  // Collect with the row's penalty mask, train, then evaluate with everything
  // enabled. Masked detections never terminate training episodes.
  RolloutBuffer buffer =
      collect(ctx.il_policy, *ctx.source, ctx.scenarios, cfg, ctx.seed, mask);
  for (const Episode& e : buffer.episodes) {
    for (PenaltyKind k : e.terminal_events) {
      if (!(mask & penalty_bit(k))) row.masked_terminations += 1;
    }
  }
  RlResult trained = train_rl(buffer, ctx.il_policy, ctx.reference, cfg);
  row.training_rows = trained.rows;

  EvalReport report = evaluate(trained.policy, *ctx.source, ctx.eval_routes, ctx.seed);
  row.ds = report.ds;
  row.sr = report.sr;
  row.ability_means = report.ability_means;
  row.mean_ability = report.mean_ability;
  return row;
}

}  // namespace

AblationTable ablate_penalties(const AblationContext& ctx) {
  AblationTable table;
  table.name = "penalties";
  const std::vector<std::pair<std::string, PenaltyMask>> sets = {
      {"none", 0},
      {"C", penalty_bit(PenaltyKind::Collision)},
      {"C+TL", penalty_bit(PenaltyKind::Collision) | penalty_bit(PenaltyKind::RedLight)},
      {"C+TL+RD", penalty_bit(PenaltyKind::Collision) | penalty_bit(PenaltyKind::RedLight) |
                      penalty_bit(PenaltyKind::RouteDeviation)},
      {"C+TL+RD+S", kAllPenalties},
  };
  for (const auto& [label, mask] : sets) {
    table.rows.push_back(run_variant(ctx, label, ctx.base_cfg, mask));
  }
  return table;
}

AblationTable ablate_rounds(const AblationContext& ctx, const std::vector<int>& rounds) {
  AblationTable table;
  table.name = "rounds";
  for (int r : rounds) {
    TrainerConfig cfg = ctx.base_cfg;
    cfg.rollout_rounds = r;
    table.rows.push_back(run_variant(ctx, "rounds=" + std::to_string(r), cfg,
                                     kAllPenalties));
  }
  return table;
}

AblationTable ablate_regularization(const AblationContext& ctx) {
  AblationTable table;
  table.name = "regularization";
  {
    TrainerConfig cfg = ctx.base_cfg;
    cfg.kl_weight = 0.0;
    cfg.entropy_coef = 0.0;
    table.rows.push_back(run_variant(ctx, "PPO-Vanilla", cfg, kAllPenalties));
  }
  {
    TrainerConfig cfg = ctx.base_cfg;
    cfg.kl_weight = 0.0;
    cfg.entropy_coef = 0.01;
    table.rows.push_back(run_variant(ctx, "PPO-Entropy", cfg, kAllPenalties));
  }
  table.rows.push_back(run_variant(ctx, "PPO-KL", ctx.base_cfg, kAllPenalties));
  return table;
}

std::string ablation_to_text(const AblationTable& table) {
  std::ostringstream os;
  os << "ablation: " << table.name << "\n";
  os << std::left;
  os.width(14);
  os << "row";
  os << "  DS      SR      MeanAb  categories\n";
  for (const AblationRow& row : table.rows) {
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << row.label;
    while (line.str().size() < 14) line << ' ';
    line << "  " << row.ds << "  " << row.sr << "  " << row.mean_ability << "  ";
    for (const auto& [cat, pct] : row.ability_means) {
      line << cat << "=" << pct << " ";
    }
    os << line.str() << "\n";
  }
  return os.str();
}

std::string ablation_to_json(const AblationTable& table) {
  json j;
  j["schema"] = "driveloop/ablation/v1";
  j["name"] = table.name;
  j["rows"] = json::array();
  for (const AblationRow& row : table.rows) {
    json jr;
    jr["label"] = row.label;
    jr["ds"] = row.ds;
    jr["sr"] = row.sr;
    jr["mean_ability"] = row.mean_ability;
    jr["ability_means"] = row.ability_means;
    jr["penalty_mask"] = row.mask;
    jr["rollout_rounds"] = row.cfg.rollout_rounds;
    jr["kl_weight"] = row.cfg.kl_weight;
    jr["entropy_coef"] = row.cfg.entropy_coef;
    jr["masked_terminations"] = row.masked_terminations;
    json eps = json::array();
    for (const RlEpochRow& er : row.training_rows) {
      eps.push_back({{"epoch", er.epoch},
                     {"ppo", er.ppo},
                     {"value", er.value},
                     {"kl", er.kl},
                     {"entropy", er.entropy},
                     {"clip_fraction", er.clip_fraction},
                     {"total", er.total}});
    }
    jr["epochs"] = eps;
    j["rows"].push_back(jr);
  }
  return j.dump(2);
}

}  // namespace driveloop
