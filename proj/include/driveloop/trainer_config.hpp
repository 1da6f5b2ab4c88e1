#pragma once

#include <cstdint>

#include "driveloop/error.hpp"

namespace driveloop {

// PPO hyperparameters; defaults follow the documented training setup.
struct TrainerConfig {
  double gamma = 0.99;
  double lambda = 1.0;
  double clip_epsilon = 0.2;
  int batch_size = 32;
  double value_weight = 0.5;
  double kl_weight = 0.5;      // beta
  double ppo_weight = 1.0;
  double entropy_coef = 0.0;   // entropy-bonus regularization variant
  double learning_rate = 1e-4;
  int epochs = 10;
  int rollout_rounds = 2;
  int workers = 24;            // scaled down to the task count at runtime
  std::uint64_t seed = 0;
};

inline void validate(const TrainerConfig& cfg) {
  if (cfg.gamma <= 0.0 || cfg.gamma > 1.0)
    throw ValidationError("trainer.gamma", "gamma must be in (0, 1]");
  if (cfg.lambda < 0.0 || cfg.lambda > 1.0)
    throw ValidationError("trainer.lambda", "lambda must be in [0, 1]");
  if (cfg.clip_epsilon <= 0.0)
    throw ValidationError("trainer.clip_epsilon", "clip_epsilon must be > 0");
  if (cfg.batch_size <= 0) throw ValidationError("trainer.batch_size", "must be > 0");
  if (cfg.epochs <= 0) throw ValidationError("trainer.epochs", "must be > 0");
  if (cfg.rollout_rounds <= 0)
    throw ValidationError("trainer.rollout_rounds", "must be > 0");
  if (cfg.workers <= 0) throw ValidationError("trainer.workers", "must be > 0");
  if (cfg.learning_rate <= 0.0)
    throw ValidationError("trainer.learning_rate", "must be > 0");
  if (cfg.value_weight < 0.0 || cfg.kl_weight < 0.0 || cfg.ppo_weight < 0.0 ||
      cfg.entropy_coef < 0.0)
    throw ValidationError("trainer.weights", "loss weights must be >= 0");
}

}  // namespace driveloop
