#pragma once

#include <span>
#include <vector>

#include "driveloop/meta_action.hpp"
#include "driveloop/nn.hpp"
#include "driveloop/rng.hpp"
#include "driveloop/trajectory.hpp"

namespace driveloop {

inline constexpr int kMetaOneHot = kNumSpeedActions + kNumPathActions;  // 13

struct DecoderDims {
  int emb = 64;
  int cond_hidden = 64;
  int latent = 8;
  int hidden = 64;
  bool operator==(const DecoderDims&) const = default;
};

// Latent trajectory generator: a condition encoder producing a Gaussian latent
// from (embedding, one-hot meta-action), and a shared recurrent cell unrolled
// over the waypoint horizon with separate displacement heads for path and
// speed. Waypoint positions are prefix sums of the emitted displacements.
struct DecoderParams {
  DecoderDims dims;
  nn::Mat ew;            // condition encoder: (emb + 13) -> cond_hidden
  std::vector<double> eb;
  nn::Mat mw, lw;        // mu / log-variance heads: cond_hidden -> latent
  std::vector<double> mb, lb;
  nn::Mat hw;            // latent -> initial hidden
  std::vector<double> hb;
  nn::Mat wz, wr, wc;    // GRU gates over [h; z]
  std::vector<double> bz, br, bc;
  nn::Mat pw, sw;        // displacement heads: hidden -> 2
  std::vector<double> pb, sb;

  static DecoderParams init(const DecoderDims& dims, std::uint64_t seed);
  nn::ParamViews all_views();
  nn::ConstParamViews all_views() const;
  bool finite() const;
};

struct DecoderGrads {
  explicit DecoderGrads(const DecoderDims& dims);
  nn::Mat ew, mw, lw, hw, wz, wr, wc, pw, sw;
  std::vector<double> eb, mb, lb, hb, bz, br, bc, pb, sb;
  void zero();
  nn::ConstParamViews all_views() const;  // same order as DecoderParams
};

struct DecodeOptions {
  bool deterministic = true;  // z = mu
  Rng* rng = nullptr;         // required when not deterministic
};

Trajectory decode(const DecoderParams& params, std::span<const double> emb,
                  MetaAction meta, const DecodeOptions& options = {});

// KL of N(mu, exp(logvar)) to the standard normal prior, summed over dims.
double vae_kl(std::span<const double> mu, std::span<const double> logvar);

struct DecoderLossParts {
  double bc = 0.0;   // mean over waypoints of |dx| + |dy|
  double kl = 0.0;   // vae_kl
  double total = 0.0;
};

// One-sample loss and gradient accumulation. `eps` is the reparameterization
// noise (empty means deterministic z = mu). Waypoint targets come from the
// oracle. Gradients are scaled by `weight` before accumulation.
DecoderLossParts decoder_loss_and_grad(const DecoderParams& params,
                                       std::span<const double> emb, MetaAction meta,
                                       const Trajectory& target,
                                       std::span<const double> eps, double kl_weight,
                                       double weight, DecoderGrads& grads);

// Loss only (same definition), for held-out metrics and finite differencing.
DecoderLossParts decoder_loss(const DecoderParams& params, std::span<const double> emb,
                              MetaAction meta, const Trajectory& target,
                              std::span<const double> eps, double kl_weight);

}  // namespace driveloop
