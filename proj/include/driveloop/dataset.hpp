#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "driveloop/encoder.hpp"
#include "driveloop/meta_action.hpp"
#include "driveloop/scenario.hpp"
#include "driveloop/trajectory.hpp"

namespace driveloop {

struct ExpertRecord {
  StateEmbedding emb;
  MetaAction label;
  Trajectory expert_traj;  // oracle_trajectory(world, label)
  std::string scenario_id;
};

// Drive every scenario closed-loop with the rule-based expert, recording
// (embedding, label, oracle trajectory) at each decision tick. Deterministic
// given the seed. steps_per_scenario caps the episode length (0 = time limit).
std::vector<ExpertRecord> generate_dataset(const std::vector<ScenarioSpec>& scenarios,
                                           int steps_per_scenario, std::uint64_t seed);

// Versioned binary dataset: header (magic, version, schema string, scenario id
// table, record count), then fixed-width records.
void save_dataset(const std::vector<ExpertRecord>& records,
                  const std::filesystem::path& path);
std::vector<ExpertRecord> load_dataset(const std::filesystem::path& path);

// Inspection export: one row per record, embeddings and waypoints flattened.
void export_dataset_csv(const std::vector<ExpertRecord>& records,
                        const std::filesystem::path& path);

}  // namespace driveloop
