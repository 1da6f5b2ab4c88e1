#include "driveloop/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "driveloop/error.hpp"

namespace driveloop {

using nlohmann::json;

namespace {

void apply_env_overrides(RunConfig& cfg) {
  if (const char* v = std::getenv("DRIVELOOP_SCENARIO_DIR")) cfg.scenario_dir = v;
  if (const char* v = std::getenv("DRIVELOOP_CHECKPOINT_DIR")) cfg.checkpoint_dir = v;
  if (const char* v = std::getenv("DRIVELOOP_REPORT_DIR")) cfg.report_dir = v;
}

}  // namespace

RunConfig run_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError("", std::string("malformed config JSON: ") + e.what());
  }
  RunConfig cfg;
  try {
    if (j.contains("paths")) {
      const json& p = j["paths"];
      cfg.scenario_dir = p.value("scenario_dir", cfg.scenario_dir.string());
      cfg.dataset_file = p.value("dataset_file", cfg.dataset_file.string());
      cfg.checkpoint_dir = p.value("checkpoint_dir", cfg.checkpoint_dir.string());
      cfg.report_dir = p.value("report_dir", cfg.report_dir.string());
    }
    if (j.contains("il")) {
      const json& p = j["il"];
      cfg.il.learning_rate = p.value("learning_rate", cfg.il.learning_rate);
      cfg.il.batch_size = p.value("batch_size", cfg.il.batch_size);
      cfg.il.epochs = p.value("epochs", cfg.il.epochs);
      cfg.il.holdout_fraction = p.value("holdout_fraction", cfg.il.holdout_fraction);
      cfg.il.vae_kl_weight = p.value("vae_kl_weight", cfg.il.vae_kl_weight);
    }
    if (j.contains("trainer")) {
      const json& p = j["trainer"];
      cfg.trainer.gamma = p.value("gamma", cfg.trainer.gamma);
      cfg.trainer.lambda = p.value("lambda", cfg.trainer.lambda);
      cfg.trainer.clip_epsilon = p.value("clip_epsilon", cfg.trainer.clip_epsilon);
      cfg.trainer.batch_size = p.value("batch_size", cfg.trainer.batch_size);
      cfg.trainer.value_weight = p.value("value_weight", cfg.trainer.value_weight);
      cfg.trainer.kl_weight = p.value("kl_weight", cfg.trainer.kl_weight);
      cfg.trainer.ppo_weight = p.value("ppo_weight", cfg.trainer.ppo_weight);
      cfg.trainer.entropy_coef = p.value("entropy_coef", cfg.trainer.entropy_coef);
      cfg.trainer.learning_rate = p.value("learning_rate", cfg.trainer.learning_rate);
      cfg.trainer.epochs = p.value("epochs", cfg.trainer.epochs);
      cfg.trainer.rollout_rounds = p.value("rollout_rounds", cfg.trainer.rollout_rounds);
      cfg.trainer.workers = p.value("workers", cfg.trainer.workers);
    }
    cfg.dataset_steps_per_scenario =
        j.value("dataset_steps_per_scenario", cfg.dataset_steps_per_scenario);
    cfg.prepass_attempts = j.value("prepass_attempts", cfg.prepass_attempts);
    cfg.trajectory_source = j.value("trajectory_source", cfg.trajectory_source);
    cfg.eval_workers = j.value("eval_workers", cfg.eval_workers);
    cfg.seed = j.value("seed", cfg.seed);
  } catch (const json::exception& e) {
    throw ValidationError("", std::string("config field error: ") + e.what());
  }
  apply_env_overrides(cfg);
  return cfg;
}

std::string run_config_to_json(const RunConfig& cfg) {
  json j;
  j["paths"] = {{"scenario_dir", cfg.scenario_dir.string()},
                {"dataset_file", cfg.dataset_file.string()},
                {"checkpoint_dir", cfg.checkpoint_dir.string()},
                {"report_dir", cfg.report_dir.string()}};
  j["il"] = {{"learning_rate", cfg.il.learning_rate},
             {"batch_size", cfg.il.batch_size},
             {"epochs", cfg.il.epochs},
             {"holdout_fraction", cfg.il.holdout_fraction},
             {"vae_kl_weight", cfg.il.vae_kl_weight}};
  j["trainer"] = {{"gamma", cfg.trainer.gamma},
                  {"lambda", cfg.trainer.lambda},
                  {"clip_epsilon", cfg.trainer.clip_epsilon},
                  {"batch_size", cfg.trainer.batch_size},
                  {"value_weight", cfg.trainer.value_weight},
                  {"kl_weight", cfg.trainer.kl_weight},
                  {"ppo_weight", cfg.trainer.ppo_weight},
                  {"entropy_coef", cfg.trainer.entropy_coef},
                  {"learning_rate", cfg.trainer.learning_rate},
                  {"epochs", cfg.trainer.epochs},
                  {"rollout_rounds", cfg.trainer.rollout_rounds},
                  {"workers", cfg.trainer.workers}};
  j["dataset_steps_per_scenario"] = cfg.dataset_steps_per_scenario;
  j["prepass_attempts"] = cfg.prepass_attempts;
  j["trajectory_source"] = cfg.trajectory_source;
  j["eval_workers"] = cfg.eval_workers;
  j["seed"] = cfg.seed;
  return j.dump(2);
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot open config file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return run_config_from_json(ss.str());
}

void validate(const RunConfig& cfg) {
  validate(cfg.il);
  validate(cfg.trainer);
  if (cfg.prepass_attempts <= 0)
    throw ValidationError("prepass_attempts", "must be > 0");
  if (cfg.trajectory_source != "oracle" && cfg.trajectory_source != "decoder")
    throw ValidationError("trajectory_source", "must be 'oracle' or 'decoder'");
  if (cfg.eval_workers <= 0) throw ValidationError("eval_workers", "must be > 0");
  if (cfg.dataset_steps_per_scenario < 0)
    throw ValidationError("dataset_steps_per_scenario", "must be >= 0");
}

}  // namespace driveloop
