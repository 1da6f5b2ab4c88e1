#pragma once

#include <filesystem>
#include <string>

#include "driveloop/il_trainer.hpp"
#include "driveloop/trainer_config.hpp"

namespace driveloop {

// Resolved run configuration; loaded from a JSON file, then overridden by CLI
// flags and (for paths only) environment variables DRIVELOOP_*_DIR.
struct RunConfig {
  std::filesystem::path scenario_dir = "scenarios";
  std::filesystem::path dataset_file = "out/dataset.bin";
  std::filesystem::path checkpoint_dir = "out/checkpoints";
  std::filesystem::path report_dir = "out/reports";

  ILConfig il;
  TrainerConfig trainer;

  int dataset_steps_per_scenario = 0;  // 0 = run to the scenario time limit
  int prepass_attempts = 5;
  std::string trajectory_source = "oracle";  // or "decoder"
  int eval_workers = 4;
  std::uint64_t seed = 0;
};

RunConfig run_config_from_json(const std::string& text);
std::string run_config_to_json(const RunConfig& cfg);
RunConfig load_run_config(const std::filesystem::path& path);

// Field-level validation; throws ValidationError.
void validate(const RunConfig& cfg);

}  // namespace driveloop
