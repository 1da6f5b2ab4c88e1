#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "driveloop/meta_action.hpp"
#include "driveloop/nn.hpp"
#include "driveloop/rng.hpp"

namespace driveloop {

// Factorized categorical distribution over (speed, path).
struct ActionDistribution {
  std::array<double, kNumSpeedActions> speed_probs{};
  std::array<double, kNumPathActions> path_probs{};

  double logprob(MetaAction a) const {
    return std::log(speed_probs[static_cast<int>(a.speed)]) +
           std::log(path_probs[static_cast<int>(a.path)]);
  }
  double entropy() const;
};

struct PolicyDims {
  int input = 64;
  int hidden = 128;        // two tanh layers of this width
  int value_hidden = 64;   // one tanh layer in the value head
  bool operator==(const PolicyDims&) const = default;
};

// Trunk + decision heads + value head. The trunk and decision heads realize
// the decision policy; the value head reads the shared trunk output but its
// loss never propagates back into the trunk.
struct PolicyParams {
  PolicyDims dims;
  nn::Mat w1, w2;                  // trunk
  std::vector<double> b1, b2;
  nn::Mat ws, wp;                  // speed / path logit heads
  std::vector<double> bs, bp;
  nn::Mat vw1, vw2;                // value head MLP
  std::vector<double> vb1, vb2;

  static PolicyParams init(const PolicyDims& dims, std::uint64_t seed);

  nn::ParamViews policy_views();       // trunk + decision heads
  nn::ParamViews value_views();        // value head only
  nn::ParamViews all_views();
  nn::ConstParamViews all_views() const;

  bool finite() const;
};

// Same shapes, used as gradient accumulators.
struct PolicyGrads {
  explicit PolicyGrads(const PolicyDims& dims);
  nn::Mat w1, w2, ws, wp, vw1, vw2;
  std::vector<double> b1, b2, bs, bp, vb1, vb2;
  void zero();
  void scale(double s);
  nn::ConstParamViews all_views() const;  // same order as PolicyParams
};

struct PolicyForward {
  ActionDistribution dist;
  double value = 0.0;
  // caches for backprop
  std::vector<double> h1, h2, vh;
  std::array<double, kNumSpeedActions> logits_s{};
  std::array<double, kNumPathActions> logits_p{};
};

PolicyForward policy_forward(const PolicyParams& params, std::span<const double> emb);

// Independent draws from the two heads; logprob is the joint log-probability.
std::pair<MetaAction, double> sample_action(const ActionDistribution& dist, Rng& rng);

// Accumulate gradients given upstream d/dlogits and d/dvalue for one sample.
// The value gradient is routed through the value head only.
void policy_backward(const PolicyParams& params, std::span<const double> emb,
                     const PolicyForward& fwd,
                     std::span<const double> dlogits_s,
                     std::span<const double> dlogits_p, double dvalue,
                     PolicyGrads& grads);

// Mean over the batch of -log p(label); factorized heads sum their terms.
struct CeBatchItem {
  std::span<const double> emb;
  MetaAction label;
};
double ce_loss(std::span<const CeBatchItem> batch, const PolicyParams& params);
double ce_loss_and_grad(std::span<const CeBatchItem> batch, const PolicyParams& params,
                        PolicyGrads& grads);

// Sum over the two heads of KL(P_ref || P_theta) at one state.
double kl_to_reference(std::span<const double> emb, const PolicyParams& params,
                       const PolicyParams& ref_params);

}  // namespace driveloop
