// driveloop command-line tool: scenario generation, expert dataset generation,
// imitation training, PPO collection/training, evaluation, and ablations.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "driveloop/checkpoint.hpp"
#include "driveloop/config.hpp"
#include "driveloop/dataset.hpp"
#include "driveloop/error.hpp"
#include "driveloop/eval.hpp"
#include "driveloop/il_trainer.hpp"
#include "driveloop/manifest.hpp"
#include "driveloop/rl_trainer.hpp"
#include "driveloop/rollout.hpp"
#include "driveloop/scenario.hpp"

namespace dl = driveloop;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

// Tracks files a command produces so a failed run can be quarantined instead
// of leaving half-written artifacts in place.
class OutputTracker {
 public:
  void add(const fs::path& p) { outputs_.push_back(p); }
  const std::vector<fs::path>& outputs() const { return outputs_; }

  void quarantine(const std::string& tag) {
    for (const fs::path& p : outputs_) {
      if (!fs::exists(p)) continue;
      fs::path dir = p.parent_path() / "failed" / tag;
      fs::create_directories(dir);
      fs::rename(p, dir / p.filename());
    }
  }

 private:
  std::vector<fs::path> outputs_;
};

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<int> rounds;
  std::optional<int> epochs;
  std::optional<std::string> out;
};

struct Context {
  dl::RunConfig cfg;
  CliOverrides over;
  std::string command;

  void apply_overrides() {
    if (over.seed) {
      cfg.seed = *over.seed;
      cfg.il.seed = *over.seed;
      cfg.trainer.seed = *over.seed;
    } else {
      cfg.il.seed = cfg.seed;
      cfg.trainer.seed = cfg.seed;
    }
    if (over.workers) cfg.trainer.workers = *over.workers;
    if (over.rounds) cfg.trainer.rollout_rounds = *over.rounds;
    if (over.epochs) cfg.trainer.epochs = *over.epochs;
    if (over.out) cfg.report_dir = *over.out;
    dl::validate(cfg);
  }
};

void write_run_manifest(const Context& ctx, const std::vector<fs::path>& inputs,
                        OutputTracker& outputs, const fs::path& where) {
  dl::Manifest m;
  m.command = ctx.command;
  m.resolved_config_json = dl::run_config_to_json(ctx.cfg);
  m.seed = ctx.cfg.seed;
  for (const fs::path& p : inputs) {
    if (fs::exists(p) && fs::is_regular_file(p))
      m.inputs.emplace_back(p.string(), dl::file_hash_hex(p));
  }
  for (const fs::path& p : outputs.outputs()) {
    if (fs::exists(p) && fs::is_regular_file(p))
      m.outputs.emplace_back(p.string(), dl::file_hash_hex(p));
  }
  dl::write_manifest(m, where);
}

std::vector<dl::ScenarioSpec> load_scenarios(const Context& ctx) {
  auto scenarios = dl::load_scenario_dir(ctx.cfg.scenario_dir);
  if (scenarios.empty())
    throw dl::ValidationError("scenario_dir",
                              "no scenarios in " + ctx.cfg.scenario_dir.string() +
                                  " (run `driveloop scenarios gen` first)");
  return scenarios;
}

std::unique_ptr<dl::TrajectorySource> make_source(const Context& ctx,
                                                  const dl::DecoderParams* decoder) {
  if (ctx.cfg.trajectory_source == "decoder") {
    if (!decoder)
      throw dl::ValidationError("trajectory_source", "decoder checkpoint required");
    return std::make_unique<dl::DecoderSource>(*decoder);
  }
  return std::make_unique<dl::OracleSource>();
}

fs::path policy_il_path(const Context& c) { return c.cfg.checkpoint_dir / "policy_il.ckpt"; }
fs::path policy_ref_path(const Context& c) { return c.cfg.checkpoint_dir / "policy_ref.ckpt"; }
fs::path policy_rl_path(const Context& c) { return c.cfg.checkpoint_dir / "policy_rl.ckpt"; }
fs::path decoder_path(const Context& c) { return c.cfg.checkpoint_dir / "decoder.ckpt"; }

// ---- commands ----

void cmd_scenarios_gen(Context& ctx) {
  OutputTracker out;
  fs::create_directories(ctx.cfg.scenario_dir);
  auto pack = dl::starter_pack();
  for (const dl::ScenarioSpec& s : pack) {
    fs::path p = ctx.cfg.scenario_dir / (s.id + ".json");
    dl::save_scenario_file(s, p);
    out.add(p);
  }
  fs::path manifest = ctx.cfg.scenario_dir / "manifest.json";
  write_run_manifest(ctx, {}, out, manifest);
  std::cout << "wrote " << pack.size() << " scenarios to " << ctx.cfg.scenario_dir
            << "\n";
}

void cmd_dataset_gen(Context& ctx, bool csv) {
  OutputTracker out;
  try {
    auto scenarios = load_scenarios(ctx);
    auto records = dl::generate_dataset(scenarios, ctx.cfg.dataset_steps_per_scenario,
                                        ctx.cfg.seed);
    fs::create_directories(ctx.cfg.dataset_file.parent_path());
    dl::save_dataset(records, ctx.cfg.dataset_file);
    out.add(ctx.cfg.dataset_file);
    if (csv) {
      fs::path csv_path = ctx.cfg.dataset_file;
      csv_path.replace_extension(".csv");
      dl::export_dataset_csv(records, csv_path);
      out.add(csv_path);
    }
    fs::path manifest = ctx.cfg.dataset_file.parent_path() / "dataset_manifest.json";
    write_run_manifest(ctx, {ctx.cfg.scenario_dir / "manifest.json"}, out, manifest);
    std::cout << "dataset: " << records.size() << " records from " << scenarios.size()
              << " scenarios -> " << ctx.cfg.dataset_file << "\n";
  } catch (...) {
    out.quarantine("dataset-gen");
    throw;
  }
}

void write_il_metrics(const dl::ILMetrics& m, const fs::path& path) {
  std::ofstream f(path);
  for (const dl::ILEpochRow& row : m.epochs) {
    json j{{"epoch", row.epoch}, {"ce", row.ce},       {"bc", row.bc},
           {"vae", row.vae},     {"total", row.total}};
    f << j.dump() << "\n";
  }
  json summary{{"holdout_accuracy", m.holdout_accuracy},
               {"holdout_speed_accuracy", m.holdout_speed_accuracy},
               {"holdout_path_accuracy", m.holdout_path_accuracy},
               {"holdout_l1", m.holdout_l1},
               {"train_count", m.train_count},
               {"holdout_count", m.holdout_count},
               {"reference_hash", m.reference_hash}};
  f << summary.dump() << "\n";
}

void cmd_il_train(Context& ctx) {
  OutputTracker out;
  try {
    auto records = dl::load_dataset(ctx.cfg.dataset_file);
    dl::PolicyParams policy = dl::PolicyParams::init({}, ctx.cfg.seed);
    dl::DecoderParams decoder = dl::DecoderParams::init({}, ctx.cfg.seed);
    dl::ILResult result = dl::train_il(records, std::move(policy), std::move(decoder),
                                       ctx.cfg.il);
    fs::create_directories(ctx.cfg.checkpoint_dir);
    dl::save_policy_checkpoint(result.policy, policy_il_path(ctx));
    dl::save_policy_checkpoint(result.reference, policy_ref_path(ctx));
    dl::save_decoder_checkpoint(result.decoder, decoder_path(ctx));
    out.add(policy_il_path(ctx));
    out.add(policy_ref_path(ctx));
    out.add(decoder_path(ctx));
    fs::path metrics = ctx.cfg.checkpoint_dir / "il_metrics.jsonl";
    write_il_metrics(result.metrics, metrics);
    out.add(metrics);
    write_run_manifest(ctx, {ctx.cfg.dataset_file}, out,
                       ctx.cfg.checkpoint_dir / "il_manifest.json");
    std::cout << "il: holdout accuracy " << result.metrics.holdout_accuracy * 100.0
              << "%, decoder L1 " << result.metrics.holdout_l1 << " m\n";
  } catch (...) {
    out.quarantine("il-train");
    throw;
  }
}

void write_rl_metrics(const std::vector<dl::RlEpochRow>& rows, const fs::path& path) {
  std::ofstream f(path);
  for (const dl::RlEpochRow& r : rows) {
    json j{{"epoch", r.epoch},     {"ppo", r.ppo},
           {"value", r.value},     {"kl", r.kl},
           {"mean_kl", r.mean_kl}, {"entropy", r.entropy},
           {"clip_fraction", r.clip_fraction}, {"total", r.total}};
    f << j.dump() << "\n";
  }
}

std::vector<dl::ScenarioSpec> select_failed(const Context& ctx,
                                            const std::vector<dl::ScenarioSpec>& all,
                                            const dl::PolicyParams& policy,
                                            const dl::TrajectorySource& source,
                                            std::vector<std::string>* ids_out) {
  auto failed_ids = dl::failed_routes(policy, source, all, ctx.cfg.prepass_attempts,
                                      ctx.cfg.trainer.workers, ctx.cfg.seed);
  std::vector<dl::ScenarioSpec> failed;
  for (const dl::ScenarioSpec& s : all) {
    for (const std::string& id : failed_ids) {
      if (s.id == id) failed.push_back(s);
    }
  }
  if (ids_out) *ids_out = failed_ids;
  return failed;
}

void cmd_rl_collect(Context& ctx) {
  OutputTracker out;
  try {
    auto scenarios = load_scenarios(ctx);
    dl::PolicyParams policy = dl::load_policy_checkpoint(policy_il_path(ctx));
    dl::DecoderParams decoder_params = dl::load_decoder_checkpoint(decoder_path(ctx));
    auto source = make_source(ctx, &decoder_params);

    std::vector<std::string> failed_ids;
    auto failed = select_failed(ctx, scenarios, policy, *source, &failed_ids);
    if (failed.empty()) {
      std::cout << "rl collect: no failed routes; nothing to collect\n";
      return;
    }
    dl::RolloutBuffer buffer =
        dl::collect(policy, *source, failed, ctx.cfg.trainer, ctx.cfg.seed);
    fs::create_directories(ctx.cfg.checkpoint_dir);
    fs::path buf_path = ctx.cfg.checkpoint_dir / "rollout_buffer.bin";
    dl::save_buffer(buffer, buf_path);
    out.add(buf_path);
    fs::path routes_path = ctx.cfg.checkpoint_dir / "rollout_routes.json";
    {
      std::ofstream f(routes_path);
      f << json(failed_ids).dump(2) << "\n";
    }
    out.add(routes_path);
    write_run_manifest(ctx, {policy_il_path(ctx)}, out,
                       ctx.cfg.checkpoint_dir / "collect_manifest.json");
    std::cout << "collected " << buffer.episodes.size() << " episodes ("
              << buffer.transition_count() << " transitions) on " << failed.size()
              << " failed routes\n";
  } catch (...) {
    out.quarantine("rl-collect");
    throw;
  }
}

void cmd_rl_train(Context& ctx) {
  OutputTracker out;
  try {
    dl::RolloutBuffer buffer =
        dl::load_buffer(ctx.cfg.checkpoint_dir / "rollout_buffer.bin");
    dl::PolicyParams policy = dl::load_policy_checkpoint(policy_il_path(ctx));
    dl::PolicyParams ref = dl::load_policy_checkpoint(policy_ref_path(ctx));
    dl::RlResult result = dl::train_rl(buffer, std::move(policy), ref, ctx.cfg.trainer);
    dl::save_policy_checkpoint(result.policy, policy_rl_path(ctx));
    out.add(policy_rl_path(ctx));
    fs::path metrics = ctx.cfg.checkpoint_dir / "rl_metrics.jsonl";
    write_rl_metrics(result.rows, metrics);
    out.add(metrics);
    write_run_manifest(ctx,
                       {ctx.cfg.checkpoint_dir / "rollout_buffer.bin",
                        policy_il_path(ctx), policy_ref_path(ctx)},
                       out, ctx.cfg.checkpoint_dir / "rl_manifest.json");
    std::cout << "rl: trained " << result.rows.size() << " epochs -> "
              << policy_rl_path(ctx) << "\n";
  } catch (...) {
    out.quarantine("rl-train");
    throw;
  }
}

void cmd_eval(Context& ctx, const std::string& checkpoint_flag) {
  OutputTracker out;
  try {
    auto scenarios = load_scenarios(ctx);
    fs::path ckpt;
    if (!checkpoint_flag.empty()) {
      ckpt = checkpoint_flag;
    } else if (fs::exists(policy_rl_path(ctx))) {
      ckpt = policy_rl_path(ctx);
    } else {
      ckpt = policy_il_path(ctx);
    }
    dl::PolicyParams policy = dl::load_policy_checkpoint(ckpt);
    dl::DecoderParams decoder_params = dl::DecoderParams::init({}, 0);
    bool have_decoder = fs::exists(decoder_path(ctx));
    if (have_decoder) decoder_params = dl::load_decoder_checkpoint(decoder_path(ctx));
    auto source = make_source(ctx, have_decoder ? &decoder_params : nullptr);

    dl::EvalOptions options;
    options.workers = ctx.cfg.eval_workers;
    fs::path routes_path = ctx.cfg.checkpoint_dir / "rollout_routes.json";
    if (fs::exists(routes_path)) {
      std::ifstream f(routes_path);
      json ids = json::parse(f);
      for (const auto& id : ids) options.rollout_ids.insert(id.get<std::string>());
    }
    dl::EvalReport report =
        dl::evaluate(policy, *source, scenarios, ctx.cfg.seed, options);
    fs::create_directories(ctx.cfg.report_dir);
    fs::path jpath = ctx.cfg.report_dir / "eval_report.json";
    fs::path cpath = ctx.cfg.report_dir / "eval_report.csv";
    dl::save_report(report, jpath, cpath);
    out.add(jpath);
    out.add(cpath);
    write_run_manifest(ctx, {ckpt}, out, ctx.cfg.report_dir / "eval_manifest.json");
    std::cout << "eval: DS " << report.ds << "  SR " << report.sr << "%  mean ability "
              << report.mean_ability << "%\n";
  } catch (...) {
    out.quarantine("eval");
    throw;
  }
}

void cmd_pipeline(Context& ctx) {
  cmd_dataset_gen(ctx, false);
  cmd_il_train(ctx);

  OutputTracker out;
  try {
    auto scenarios = load_scenarios(ctx);
    dl::PolicyParams il_policy = dl::load_policy_checkpoint(policy_il_path(ctx));
    dl::PolicyParams ref = dl::load_policy_checkpoint(policy_ref_path(ctx));
    dl::DecoderParams decoder_params = dl::load_decoder_checkpoint(decoder_path(ctx));
    auto source = make_source(ctx, &decoder_params);

    std::vector<std::string> failed_ids;
    auto failed = select_failed(ctx, scenarios, il_policy, *source, &failed_ids);
    fs::path routes_path = ctx.cfg.checkpoint_dir / "rollout_routes.json";
    {
      std::ofstream f(routes_path);
      f << json(failed_ids).dump(2) << "\n";
    }
    out.add(routes_path);
    std::cout << "pipeline: " << failed.size() << " failed routes selected for RL\n";

    dl::PolicyParams rl_policy = il_policy;
    if (!failed.empty()) {
      dl::RolloutBuffer buffer =
          dl::collect(il_policy, *source, failed, ctx.cfg.trainer, ctx.cfg.seed);
      fs::path buf_path = ctx.cfg.checkpoint_dir / "rollout_buffer.bin";
      dl::save_buffer(buffer, buf_path);
      out.add(buf_path);
      dl::RlResult result = dl::train_rl(buffer, std::move(rl_policy), ref,
                                         ctx.cfg.trainer);
      rl_policy = std::move(result.policy);
      fs::path metrics = ctx.cfg.checkpoint_dir / "rl_metrics.jsonl";
      write_rl_metrics(result.rows, metrics);
      out.add(metrics);
    }
    dl::save_policy_checkpoint(rl_policy, policy_rl_path(ctx));
    out.add(policy_rl_path(ctx));

    dl::EvalOptions options;
    options.workers = ctx.cfg.eval_workers;
    options.rollout_ids.insert(failed_ids.begin(), failed_ids.end());
    dl::EvalReport il_report =
        dl::evaluate(il_policy, *source, scenarios, ctx.cfg.seed, options);
    dl::EvalReport rl_report =
        dl::evaluate(rl_policy, *source, scenarios, ctx.cfg.seed, options);

    fs::create_directories(ctx.cfg.report_dir);
    dl::save_report(il_report, ctx.cfg.report_dir / "il_report.json",
                    ctx.cfg.report_dir / "il_report.csv");
    dl::save_report(rl_report, ctx.cfg.report_dir / "rl_report.json",
                    ctx.cfg.report_dir / "rl_report.csv");
    out.add(ctx.cfg.report_dir / "il_report.json");
    out.add(ctx.cfg.report_dir / "rl_report.json");
    write_run_manifest(ctx, {ctx.cfg.dataset_file}, out,
                       ctx.cfg.report_dir / "pipeline_manifest.json");

    std::cout << "pipeline summary:\n"
              << "  IL : DS " << il_report.ds << "  SR " << il_report.sr << "%\n"
              << "  RL : DS " << rl_report.ds << "  SR " << rl_report.sr << "%\n";
    if (il_report.rollout_ds) {
      std::cout << "  rollout split IL: DS " << *il_report.rollout_ds << " SR "
                << *il_report.rollout_sr << "%  RL: DS " << *rl_report.rollout_ds
                << " SR " << *rl_report.rollout_sr << "%\n";
    }
  } catch (...) {
    out.quarantine("pipeline");
    throw;
  }
}

void cmd_ablate(Context& ctx, const std::string& which, std::vector<int> rounds) {
  OutputTracker out;
  try {
    auto scenarios = load_scenarios(ctx);
    dl::AblationContext actx;
    actx.il_policy = dl::load_policy_checkpoint(policy_il_path(ctx));
    actx.reference = dl::load_policy_checkpoint(policy_ref_path(ctx));
    dl::DecoderParams decoder_params = dl::load_decoder_checkpoint(decoder_path(ctx));
    auto source = make_source(ctx, &decoder_params);
    actx.source = source.get();
    actx.eval_routes = scenarios;
    actx.base_cfg = ctx.cfg.trainer;
    actx.seed = ctx.cfg.seed;

    std::vector<std::string> failed_ids;
    actx.scenarios = select_failed(ctx, scenarios, actx.il_policy, *source, &failed_ids);
    if (actx.scenarios.empty()) actx.scenarios = scenarios;

    dl::AblationTable table;
    if (which == "penalties") {
      table = dl::ablate_penalties(actx);
    } else if (which == "rounds") {
      if (rounds.empty()) rounds = {1, 2, 3, 4};
      table = dl::ablate_rounds(actx, rounds);
    } else if (which == "regularization") {
      table = dl::ablate_regularization(actx);
    } else {
      throw dl::ValidationError("ablate", "unknown ablation: " + which);
    }

    fs::create_directories(ctx.cfg.report_dir);
    fs::path jpath = ctx.cfg.report_dir / ("ablate_" + which + ".json");
    fs::path tpath = ctx.cfg.report_dir / ("ablate_" + which + ".txt");
    {
      std::ofstream f(jpath);
      f << dl::ablation_to_json(table) << "\n";
    }
    {
      std::ofstream f(tpath);
      f << dl::ablation_to_text(table);
    }
    out.add(jpath);
    out.add(tpath);
    // One manifest per row, as each row is an independently reproducible run.
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      Context row_ctx = ctx;
      row_ctx.cfg.trainer = table.rows[i].cfg;
      row_ctx.command = ctx.command + " [row " + table.rows[i].label + "]";
      OutputTracker row_out;
      row_out.add(jpath);
      fs::path mpath =
          ctx.cfg.report_dir / ("ablate_" + which + "_row" + std::to_string(i) +
                                "_manifest.json");
      write_run_manifest(row_ctx, {policy_il_path(ctx), policy_ref_path(ctx)}, row_out,
                         mpath);
      out.add(mpath);
    }
    std::cout << dl::ablation_to_text(table);
  } catch (...) {
    out.quarantine("ablate-" + which);
    throw;
  }
}

void cmd_report(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw dl::ValidationError("report", "cannot open report: " + path);
  json j = json::parse(f);
  std::cout << "report " << path << "\n";
  std::cout << "  DS " << j["ds"].get<double>() << "  SR " << j["sr"].get<double>()
            << "%  mean ability " << j["mean_ability"].get<double>() << "%\n";
  if (j.contains("rollout_split")) {
    std::cout << "  rollout split: " << j["rollout_split"].dump() << "\n";
  }
  for (const auto& r : j["routes"]) {
    std::cout << "  " << r["scenario_id"].get<std::string>() << " ["
              << r["category"].get<std::string>() << "] score "
              << r["driving_score"].get<double>()
              << (r["success"].get<bool>() ? " success" : "") << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"driveloop: closed-loop meta-action driving RL framework"};
  app.require_subcommand(1);

  std::string config_path;
  CliOverrides over;
  app.add_option("--config", config_path, "run configuration JSON file");
  std::uint64_t seed_val = 0;
  int workers_val = 0, rounds_val = 0, epochs_val = 0;
  std::string out_val;
  auto* seed_opt = app.add_option("--seed", seed_val, "global seed override");
  auto* workers_opt = app.add_option("--workers", workers_val, "collection workers");
  auto* rounds_opt = app.add_option("--rounds", rounds_val, "rollout rounds per route");
  auto* epochs_opt = app.add_option("--epochs", epochs_val, "training epochs");
  auto* out_opt = app.add_option("--out", out_val, "report output directory");

  auto* scen = app.add_subcommand("scenarios", "scenario management");
  auto* scen_gen = scen->add_subcommand("gen", "write the bundled starter pack");
  auto* dataset = app.add_subcommand("dataset", "expert dataset");
  auto* dataset_gen = dataset->add_subcommand("gen", "generate the expert dataset");
  bool dataset_csv = false;
  dataset_gen->add_flag("--csv", dataset_csv, "also export a CSV copy");
  auto* il = app.add_subcommand("il", "imitation learning");
  auto* il_train = il->add_subcommand("train", "train decision heads and decoder");
  auto* rl = app.add_subcommand("rl", "online reinforcement learning");
  auto* rl_collect = rl->add_subcommand("collect", "collect rollouts on failed routes");
  auto* rl_train = rl->add_subcommand("train", "PPO training on the collected buffer");
  auto* pipeline = app.add_subcommand("pipeline", "IL -> pre-pass -> collect -> train -> eval");
  auto* eval_cmd = app.add_subcommand("eval", "closed-loop evaluation");
  std::string eval_ckpt;
  eval_cmd->add_option("--checkpoint", eval_ckpt, "policy checkpoint to evaluate");
  auto* ablate = app.add_subcommand("ablate", "ablation studies");
  auto* ab_pen = ablate->add_subcommand("penalties", "cumulative penalty sets");
  auto* ab_rounds = ablate->add_subcommand("rounds", "rollout round counts");
  std::vector<int> rounds_list;
  ab_rounds->add_option("--list", rounds_list, "round counts to sweep");
  auto* ab_reg = ablate->add_subcommand("regularization", "policy regularization variants");
  auto* report_cmd = app.add_subcommand("report", "print a stored report");
  std::string report_path;
  report_cmd->add_option("path", report_path, "report JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  Context ctx;
  try {
    if (!config_path.empty()) ctx.cfg = dl::load_run_config(config_path);
    if (*seed_opt) over.seed = seed_val;
    if (*workers_opt) over.workers = workers_val;
    if (*rounds_opt) over.rounds = rounds_val;
    if (*epochs_opt) over.epochs = epochs_val;
    if (*out_opt) over.out = out_val;
    ctx.over = over;
    for (int i = 0; i < argc; ++i) {
      if (i) ctx.command += " ";
      ctx.command += argv[i];
    }
    ctx.apply_overrides();

    if (scen_gen->parsed()) {
      cmd_scenarios_gen(ctx);
    } else if (dataset_gen->parsed()) {
      cmd_dataset_gen(ctx, dataset_csv);
    } else if (il_train->parsed()) {
      cmd_il_train(ctx);
    } else if (rl_collect->parsed()) {
      cmd_rl_collect(ctx);
    } else if (rl_train->parsed()) {
      cmd_rl_train(ctx);
    } else if (pipeline->parsed()) {
      cmd_pipeline(ctx);
    } else if (eval_cmd->parsed()) {
      cmd_eval(ctx, eval_ckpt);
    } else if (ab_pen->parsed()) {
      cmd_ablate(ctx, "penalties", {});
    } else if (ab_rounds->parsed()) {
      cmd_ablate(ctx, "rounds", rounds_list);
    } else if (ab_reg->parsed()) {
      cmd_ablate(ctx, "regularization", {});
    } else if (report_cmd->parsed()) {
      cmd_report(report_path);
    } else {
      std::cerr << app.help() << "\n";
      return kExitUsage;
    }
  } catch (const dl::ValidationError& e) {
    std::cerr << "validation error";
    if (!e.field().empty()) std::cerr << " [" << e.field() << "]";
    std::cerr << ": " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
