#pragma once

#include <span>
#include <vector>

#include "driveloop/policy.hpp"
#include "driveloop/rollout.hpp"
#include "driveloop/trainer_config.hpp"

namespace driveloop {

// Per-episode advantage quantities.
struct AdvantageEstimates {
  std::vector<double> deltas;   // TD residuals
  std::vector<double> gae;      // backward-recursion advantages
  std::vector<double> returns;  // gae + stored value (value targets)
};

// One-step TD residuals r_t + gamma V(s_{t+1}) - V(s_t); the value beyond the
// final transition is 0 at termination and the stored bootstrap on truncation.
std::vector<double> td_deltas(const Episode& episode, double gamma);

// Backward recursion G_t = delta_t + gamma * lambda * G_{t+1}.
std::vector<double> gae_from_deltas(std::span<const double> deltas, double gamma,
                                    double lambda);

AdvantageEstimates compute_advantages(const Episode& episode, double gamma,
                                      double lambda);

// A transition paired with its advantage targets; advantages are used as
// stored, never renormalized.
struct RlSample {
  const Transition* transition;
  double advantage;
  double return_target;
};

std::vector<RlSample> make_samples(const RolloutBuffer& buffer,
                                   const std::vector<AdvantageEstimates>& adv);

// Negated clipped surrogate (a loss to minimize).
double ppo_loss(std::span<const RlSample> batch, const PolicyParams& params,
                const TrainerConfig& cfg);

// Mean squared error of the value head against the return targets.
double value_loss(std::span<const RlSample> batch, const PolicyParams& params);

struct RlBatchMetrics {
  double ppo = 0.0;
  double value = 0.0;
  double kl = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double total = 0.0;
};

// Weighted total loss; with `grads` non-null also accumulates the analytic
// gradient. Value-loss gradients reach only the value head.
RlBatchMetrics rl_losses(std::span<const RlSample> batch, const PolicyParams& params,
                         const PolicyParams& ref_params, const TrainerConfig& cfg,
                         PolicyGrads* grads = nullptr);

struct RlEpochRow {
  int epoch = 0;
  double ppo = 0.0;
  double value = 0.0;
  double kl = 0.0;
  double mean_kl = 0.0;  // unweighted KL to reference, averaged
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double total = 0.0;
};

struct RlResult {
  PolicyParams policy;
  std::vector<RlEpochRow> rows;
};

// PPO with KL-to-reference regularization on the collected buffer: epochs of
// seeded shuffling over minibatches. Throws TrainingError on divergence,
// restoring the last finite checkpoint.
RlResult train_rl(const RolloutBuffer& buffer, PolicyParams policy,
                  const PolicyParams& ref_params, const TrainerConfig& cfg);

}  // namespace driveloop
