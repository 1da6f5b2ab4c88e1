#include "driveloop/rl_trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "driveloop/error.hpp"
#include "driveloop/rng.hpp"

namespace driveloop {

std::vector<double> td_deltas(const Episode& episode, double gamma) {
  if (episode.transitions.empty()) throw ArgumentError("td_deltas: empty episode");
  std::size_t n = episode.transitions.size();
  std::vector<double> deltas(n);
  for (std::size_t t = 0; t < n; ++t) {
    const Transition& tr = episode.transitions[t];
    double next_value;
    if (t + 1 < n) {
      next_value = episode.transitions[t + 1].value;
    } else {
      next_value = episode.truncated_by_time ? episode.bootstrap_value : 0.0;
    }
    deltas[t] = static_cast<double>(tr.reward) + gamma * next_value - tr.value;
  }
  return deltas;
}

std::vector<double> gae_from_deltas(std::span<const double> deltas, double gamma,
                                    double lambda) {
  std::vector<double> gae(deltas.size());
  double acc = 0.0;
  for (std::size_t i = deltas.size(); i-- > 0;) {
    acc = deltas[i] + gamma * lambda * acc;
    gae[i] = acc;
  }
  return gae;
}

AdvantageEstimates compute_advantages(const Episode& episode, double gamma,
                                      double lambda) {
  AdvantageEstimates adv;
  adv.deltas = td_deltas(episode, gamma);
  adv.gae = gae_from_deltas(adv.deltas, gamma, lambda);
  adv.returns.resize(adv.gae.size());
  for (std::size_t i = 0; i < adv.gae.size(); ++i) {
    adv.returns[i] = adv.gae[i] + episode.transitions[i].value;
  }
  return adv;
}

std::vector<RlSample> make_samples(const RolloutBuffer& buffer,
                                   const std::vector<AdvantageEstimates>& adv) {
  std::vector<RlSample> samples;
  for (std::size_t e = 0; e < buffer.episodes.size(); ++e) {
    const Episode& ep = buffer.episodes[e];
    for (std::size_t t = 0; t < ep.transitions.size(); ++t) {
      samples.push_back({&ep.transitions[t], adv[e].gae[t], adv[e].returns[t]});
    }
  }
  return samples;
}

namespace {

// Clipping binds (zero gradient) when the ratio has escaped the trust region
// on the profitable side.
inline bool clip_dead(double rho, double advantage, double eps) {
  return (advantage > 0.0 && rho > 1.0 + eps) || (advantage < 0.0 && rho < 1.0 - eps);
}

template <std::size_t N>
double head_entropy(const std::array<double, N>& probs) {
  double h = 0.0;
  for (double p : probs) h -= p * std::log(p);
  return h;
}

}  // namespace

double ppo_loss(std::span<const RlSample> batch, const PolicyParams& params,
                const TrainerConfig& cfg) {
  if (batch.empty()) throw ArgumentError("ppo_loss: empty batch");
  double total = 0.0;
  for (const RlSample& s : batch) {
    PolicyForward f = policy_forward(params, s.transition->emb.values);
    double rho = std::exp(f.dist.logprob(s.transition->action) - s.transition->logprob);
    double clipped = std::clamp(rho, 1.0 - cfg.clip_epsilon, 1.0 + cfg.clip_epsilon);
    total += std::min(rho * s.advantage, clipped * s.advantage);
  }
  return -total / static_cast<double>(batch.size());
}

double value_loss(std::span<const RlSample> batch, const PolicyParams& params) {
  if (batch.empty()) throw ArgumentError("value_loss: empty batch");
  double total = 0.0;
  for (const RlSample& s : batch) {
    PolicyForward f = policy_forward(params, s.transition->emb.values);
    double r = f.value - s.return_target;
    total += r * r;
  }
  return total / static_cast<double>(batch.size());
}

RlBatchMetrics rl_losses(std::span<const RlSample> batch, const PolicyParams& params,
                         const PolicyParams& ref_params, const TrainerConfig& cfg,
                         PolicyGrads* grads) {
  if (batch.empty()) throw ArgumentError("rl_losses: empty batch");
  RlBatchMetrics m;
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  std::array<double, kNumSpeedActions> dls;
  std::array<double, kNumPathActions> dlp;

  for (const RlSample& s : batch) {
    auto emb = std::span<const double>(s.transition->emb.values);
    PolicyForward f = policy_forward(params, emb);
    PolicyForward fr = policy_forward(ref_params, emb);
    const MetaAction action = s.transition->action;

    double logprob = f.dist.logprob(action);
    double rho = std::exp(logprob - s.transition->logprob);
    double clipped = std::clamp(rho, 1.0 - cfg.clip_epsilon, 1.0 + cfg.clip_epsilon);
    double surrogate = std::min(rho * s.advantage, clipped * s.advantage);
    m.ppo -= surrogate * inv_n;
    bool dead = clip_dead(rho, s.advantage, cfg.clip_epsilon);
    m.clip_fraction += dead ? inv_n : 0.0;

    double kl = 0.0;
    for (int i = 0; i < kNumSpeedActions; ++i) {
      kl += fr.dist.speed_probs[i] *
            (std::log(fr.dist.speed_probs[i]) - std::log(f.dist.speed_probs[i]));
    }
    for (int i = 0; i < kNumPathActions; ++i) {
      kl += fr.dist.path_probs[i] *
            (std::log(fr.dist.path_probs[i]) - std::log(f.dist.path_probs[i]));
    }
    m.kl += kl * inv_n;

    double entropy = f.dist.entropy();
    m.entropy += entropy * inv_n;

    double residual = f.value - s.return_target;
    m.value += residual * residual * inv_n;

    if (grads) {
      // d(-surrogate)/dlogits: the policy-gradient factor vanishes in the
      // clip dead zone; otherwise it is -rho * advantage * dlogprob.
      double pg = 0.0;
      if (s.advantage != 0.0 && !dead) {
        pg = -cfg.ppo_weight * rho * s.advantage * inv_n;
      }
      int a_s = static_cast<int>(action.speed);
      int a_p = static_cast<int>(action.path);
      double hs = head_entropy(f.dist.speed_probs);
      double hp = head_entropy(f.dist.path_probs);
      for (int i = 0; i < kNumSpeedActions; ++i) {
        double p = f.dist.speed_probs[i];
        double dlogp = (i == a_s ? 1.0 : 0.0) - p;
        double dkl = p - fr.dist.speed_probs[i];
        double dent = -p * (std::log(p) + hs);  // dH/dlogit
        dls[i] = pg * dlogp + cfg.kl_weight * inv_n * dkl -
                 cfg.entropy_coef * inv_n * dent;
      }
      for (int i = 0; i < kNumPathActions; ++i) {
        double p = f.dist.path_probs[i];
        double dlogp = (i == a_p ? 1.0 : 0.0) - p;
        double dkl = p - fr.dist.path_probs[i];
        double dent = -p * (std::log(p) + hp);
        dlp[i] = pg * dlogp + cfg.kl_weight * inv_n * dkl -
                 cfg.entropy_coef * inv_n * dent;
      }
      double dvalue = cfg.value_weight * 2.0 * residual * inv_n;
      policy_backward(params, emb, f, dls, dlp, dvalue, *grads);
    }
  }
  m.total = cfg.ppo_weight * m.ppo + cfg.value_weight * m.value + cfg.kl_weight * m.kl -
            cfg.entropy_coef * m.entropy;
  return m;
}

RlResult train_rl(const RolloutBuffer& buffer, PolicyParams policy,
                  const PolicyParams& ref_params, const TrainerConfig& cfg) {
  if (buffer.episodes.empty()) throw ArgumentError("train_rl: empty buffer");
  validate(cfg);
  for (const Episode& e : buffer.episodes) {
    if (e.transitions.empty()) throw ArgumentError("train_rl: episode with no transitions");
  }

  std::vector<AdvantageEstimates> adv;
  adv.reserve(buffer.episodes.size());
  for (const Episode& e : buffer.episodes) {
    adv.push_back(compute_advantages(e, cfg.gamma, cfg.lambda));
  }
  std::vector<RlSample> samples = make_samples(buffer, adv);

  RlResult result{std::move(policy), {}};
  PolicyParams last_finite = result.policy;
  nn::Adam opt(cfg.learning_rate);
  PolicyGrads grads(result.policy.dims);
  Rng rng(derive_seed(cfg.seed, "rl-train"));

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // Seeded Fisher-Yates, same transform as the IL trainer.
    for (std::size_t i = order.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(rng.uniform01() * i);
      if (j >= i) j = i - 1;
      std::swap(order[i - 1], order[j]);
    }
    RlEpochRow row;
    row.epoch = epoch;
    std::size_t batches = 0;
    std::vector<RlSample> batch;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      batch.clear();
      for (std::size_t k = start; k < end; ++k) batch.push_back(samples[order[k]]);

      grads.zero();
      RlBatchMetrics m = rl_losses(batch, result.policy, ref_params, cfg, &grads);
      if (!std::isfinite(m.total)) {
        result.policy = last_finite;
        throw TrainingError("train_rl: loss diverged; last finite checkpoint restored");
      }
      auto views = result.policy.all_views();
      opt.update(views, grads.all_views());

      row.ppo += m.ppo;
      row.value += m.value;
      row.kl += m.kl;
      row.mean_kl += m.kl;
      row.entropy += m.entropy;
      row.clip_fraction += m.clip_fraction;
      row.total += m.total;
      ++batches;
    }
    if (batches > 0) {
      double inv = 1.0 / static_cast<double>(batches);
      row.ppo *= inv;
      row.value *= inv;
      row.kl *= inv;
      row.mean_kl *= inv;
      row.entropy *= inv;
      row.clip_fraction *= inv;
      row.total *= inv;
    }
    result.rows.push_back(row);
    last_finite = result.policy;
  }
  return result;
}

}  // namespace driveloop
