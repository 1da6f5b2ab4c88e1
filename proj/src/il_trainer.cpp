#include "driveloop/il_trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "driveloop/checkpoint.hpp"
#include "driveloop/error.hpp"
#include "driveloop/rng.hpp"

namespace driveloop {

void validate(const ILConfig& cfg) {
  if (cfg.learning_rate <= 0.0) throw ValidationError("il.learning_rate", "must be > 0");
  if (cfg.batch_size <= 0) throw ValidationError("il.batch_size", "must be > 0");
  if (cfg.epochs <= 0) throw ValidationError("il.epochs", "must be > 0");
  if (cfg.holdout_fraction <= 0.0 || cfg.holdout_fraction >= 1.0)
    throw ValidationError("il.holdout_fraction", "must be in (0, 1)");
  if (cfg.vae_kl_weight < 0.0) throw ValidationError("il.vae_kl_weight", "must be >= 0");
}

namespace {

// Seeded shuffle via our own Rng so the permutation is platform-stable.
void shuffle_indices(std::vector<std::size_t>& idx, Rng& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.uniform01() * i);
    if (j >= i) j = i - 1;
    std::swap(idx[i - 1], idx[j]);
  }
}

}  // namespace

ILMetrics evaluate_il(const std::vector<ExpertRecord>& holdout,
                      const PolicyParams& policy, const DecoderParams& decoder) {
  ILMetrics m;
  m.holdout_count = static_cast<int>(holdout.size());
  if (holdout.empty()) return m;
  int joint_hits = 0, speed_hits = 0, path_hits = 0;
  double l1 = 0.0;
  for (const ExpertRecord& r : holdout) {
    PolicyForward f = policy_forward(policy, r.emb.values);
    int s_pred = static_cast<int>(std::max_element(f.dist.speed_probs.begin(),
                                                   f.dist.speed_probs.end()) -
                                  f.dist.speed_probs.begin());
    int p_pred = static_cast<int>(std::max_element(f.dist.path_probs.begin(),
                                                   f.dist.path_probs.end()) -
                                  f.dist.path_probs.begin());
    bool s_ok = s_pred == static_cast<int>(r.label.speed);
    bool p_ok = p_pred == static_cast<int>(r.label.path);
    speed_hits += s_ok;
    path_hits += p_ok;
    joint_hits += s_ok && p_ok;
    l1 += decoder_loss(decoder, r.emb.values, r.label, r.expert_traj, {}, 0.0).bc;
  }
  double n = static_cast<double>(holdout.size());
  m.holdout_accuracy = joint_hits / n;
  m.holdout_speed_accuracy = speed_hits / n;
  m.holdout_path_accuracy = path_hits / n;
  m.holdout_l1 = l1 / n;
  return m;
}

ILResult train_il(const std::vector<ExpertRecord>& dataset, PolicyParams policy,
                  DecoderParams decoder, const ILConfig& cfg) {
  if (dataset.empty()) throw ArgumentError("train_il: empty dataset");
  validate(cfg);

  // Deterministic split: shuffle once, then cut.
  std::vector<std::size_t> idx(dataset.size());
  std::iota(idx.begin(), idx.end(), 0);
  Rng split_rng(derive_seed(cfg.seed, "il-split"));
  shuffle_indices(idx, split_rng);
  std::size_t holdout_n =
      std::max<std::size_t>(1, static_cast<std::size_t>(dataset.size() * cfg.holdout_fraction));
  if (dataset.size() == 1) holdout_n = 0;  // single-record overfit case
  std::vector<std::size_t> train_idx(idx.begin(), idx.end() - holdout_n);
  std::vector<ExpertRecord> holdout;
  for (auto it = idx.end() - holdout_n; it != idx.end(); ++it)
    holdout.push_back(dataset[*it]);

  nn::Adam policy_opt(cfg.learning_rate);
  nn::Adam decoder_opt(cfg.learning_rate);
  PolicyGrads pgrads(policy.dims);
  DecoderGrads dgrads(decoder.dims);
  Rng train_rng(derive_seed(cfg.seed, "il-train"));

  ILResult result{std::move(policy), std::move(decoder), PolicyParams{}, {}};
  PolicyParams last_finite_policy = result.policy;
  DecoderParams last_finite_decoder = result.decoder;

  std::vector<double> eps(result.decoder.dims.latent);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_indices(train_idx, train_rng);
    ILEpochRow row;
    row.epoch = epoch;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < train_idx.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      std::size_t end =
          std::min(train_idx.size(), start + static_cast<std::size_t>(cfg.batch_size));
      std::size_t bn = end - start;

      // Decision heads: cross entropy.
      std::vector<CeBatchItem> batch;
      batch.reserve(bn);
      for (std::size_t k = start; k < end; ++k) {
        const ExpertRecord& r = dataset[train_idx[k]];
        batch.push_back({r.emb.values, r.label});
      }
      pgrads.zero();
      double ce = ce_loss_and_grad(batch, result.policy, pgrads);

      // Decoder: behavior cloning + VAE KL, reparameterized sampling.
      dgrads.zero();
      double bc = 0.0, vae = 0.0;
      double inv_bn = 1.0 / static_cast<double>(bn);
      for (std::size_t k = start; k < end; ++k) {
        const ExpertRecord& r = dataset[train_idx[k]];
        for (double& e : eps) e = train_rng.normal();
        DecoderLossParts parts =
            decoder_loss_and_grad(result.decoder, r.emb.values, r.label, r.expert_traj,
                                  eps, cfg.vae_kl_weight, inv_bn, dgrads);
        bc += parts.bc * inv_bn;
        vae += parts.kl * inv_bn;
      }

      double total = ce + bc + cfg.vae_kl_weight * vae;
      if (!std::isfinite(total)) {
        result.policy = last_finite_policy;
        result.decoder = last_finite_decoder;
        throw TrainingError("train_il: loss diverged; last finite checkpoint restored");
      }
      auto pviews = result.policy.policy_views();
      nn::ConstParamViews pg = {pgrads.w1.w, pgrads.b1, pgrads.w2.w, pgrads.b2,
                                pgrads.ws.w, pgrads.bs, pgrads.wp.w, pgrads.bp};
      policy_opt.update(pviews, pg);
      auto dviews = result.decoder.all_views();
      decoder_opt.update(dviews, dgrads.all_views());

      row.ce += ce;
      row.bc += bc;
      row.vae += vae;
      row.total += total;
      ++batches;
    }
    if (batches > 0) {
      double inv = 1.0 / static_cast<double>(batches);
      row.ce *= inv;
      row.bc *= inv;
      row.vae *= inv;
      row.total *= inv;
    }
    result.metrics.epochs.push_back(row);
    last_finite_policy = result.policy;
    last_finite_decoder = result.decoder;
  }

  ILMetrics holdout_metrics = evaluate_il(holdout, result.policy, result.decoder);
  result.metrics.holdout_accuracy = holdout_metrics.holdout_accuracy;
  result.metrics.holdout_speed_accuracy = holdout_metrics.holdout_speed_accuracy;
  result.metrics.holdout_path_accuracy = holdout_metrics.holdout_path_accuracy;
  result.metrics.holdout_l1 = holdout_metrics.holdout_l1;
  result.metrics.train_count = static_cast<int>(train_idx.size());
  result.metrics.holdout_count = static_cast<int>(holdout.size());

  result.reference = result.policy;  // frozen snapshot for the KL anchor
  result.metrics.reference_hash = params_hash(result.reference);
  return result;
}

}  // namespace driveloop
