#pragma once

#include <cstdint>
#include <vector>

#include "driveloop/dataset.hpp"
#include "driveloop/decoder.hpp"
#include "driveloop/policy.hpp"

namespace driveloop {

struct ILConfig {
  double learning_rate = 3e-4;
  int batch_size = 64;
  int epochs = 20;
  double holdout_fraction = 0.1;  // in (0, 1)
  double vae_kl_weight = 0.1;
  std::uint64_t seed = 0;
};

void validate(const ILConfig& cfg);

struct ILEpochRow {
  int epoch = 0;
  double ce = 0.0;
  double bc = 0.0;
  double vae = 0.0;
  double total = 0.0;
};

struct ILMetrics {
  std::vector<ILEpochRow> epochs;
  double holdout_accuracy = 0.0;      // joint (speed AND path) top-1
  double holdout_speed_accuracy = 0.0;
  double holdout_path_accuracy = 0.0;
  double holdout_l1 = 0.0;            // mean |dx|+|dy| per waypoint, meters
  int train_count = 0;
  int holdout_count = 0;
  std::uint64_t reference_hash = 0;   // hash of the frozen reference snapshot
};

struct ILResult {
  PolicyParams policy;
  DecoderParams decoder;
  PolicyParams reference;  // frozen copy of `policy` for KL regularization
  ILMetrics metrics;
};

// Stage 1: cross-entropy on the decision heads, L1 behavior cloning plus
// weighted VAE KL on the decoder, Adam, seeded shuffling. The policy snapshot
// taken at the end is the RL reference. Throws TrainingError on divergence.
ILResult train_il(const std::vector<ExpertRecord>& dataset, PolicyParams policy,
                  DecoderParams decoder, const ILConfig& cfg);

// Held-out metrics for an arbitrary parameter pair (used by tests).
ILMetrics evaluate_il(const std::vector<ExpertRecord>& holdout,
                      const PolicyParams& policy, const DecoderParams& decoder);

}  // namespace driveloop
