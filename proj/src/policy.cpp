#include "driveloop/policy.hpp"

#include <cmath>

#include "driveloop/error.hpp"

namespace driveloop {

double ActionDistribution::entropy() const {
  double h = 0.0;
  for (double p : speed_probs) h -= p * std::log(p);
  for (double p : path_probs) h -= p * std::log(p);
  return h;
}

PolicyParams PolicyParams::init(const PolicyDims& dims, std::uint64_t seed) {
  PolicyParams p;
  p.dims = dims;
  Rng rng(derive_seed(seed, "policy-init"));
  p.w1 = nn::Mat(dims.hidden, dims.input);
  p.w2 = nn::Mat(dims.hidden, dims.hidden);
  p.ws = nn::Mat(kNumSpeedActions, dims.hidden);
  p.wp = nn::Mat(kNumPathActions, dims.hidden);
  p.vw1 = nn::Mat(dims.value_hidden, dims.hidden);
  p.vw2 = nn::Mat(1, dims.value_hidden);
  p.b1.assign(dims.hidden, 0.0);
  p.b2.assign(dims.hidden, 0.0);
  p.bs.assign(kNumSpeedActions, 0.0);
  p.bp.assign(kNumPathActions, 0.0);
  p.vb1.assign(dims.value_hidden, 0.0);
  p.vb2.assign(1, 0.0);
  nn::init_uniform(p.w1, rng);
  nn::init_uniform(p.w2, rng);
  nn::init_uniform(p.ws, rng);
  nn::init_uniform(p.wp, rng);
  nn::init_uniform(p.vw1, rng);
  nn::init_uniform(p.vw2, rng);
  return p;
}

nn::ParamViews PolicyParams::policy_views() {
  return {w1.w, b1, w2.w, b2, ws.w, bs, wp.w, bp};
}

nn::ParamViews PolicyParams::value_views() { return {vw1.w, vb1, vw2.w, vb2}; }

nn::ParamViews PolicyParams::all_views() {
  return {w1.w, b1, w2.w, b2, ws.w, bs, wp.w, bp, vw1.w, vb1, vw2.w, vb2};
}

nn::ConstParamViews PolicyParams::all_views() const {
  return {w1.w, b1, w2.w, b2, ws.w, bs, wp.w, bp, vw1.w, vb1, vw2.w, vb2};
}

bool PolicyParams::finite() const {
  for (const auto& view : all_views()) {
    for (double v : view) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

PolicyGrads::PolicyGrads(const PolicyDims& d)
    : w1(d.hidden, d.input),
      w2(d.hidden, d.hidden),
      ws(kNumSpeedActions, d.hidden),
      wp(kNumPathActions, d.hidden),
      vw1(d.value_hidden, d.hidden),
      vw2(1, d.value_hidden),
      b1(d.hidden, 0.0),
      b2(d.hidden, 0.0),
      bs(kNumSpeedActions, 0.0),
      bp(kNumPathActions, 0.0),
      vb1(d.value_hidden, 0.0),
      vb2(1, 0.0) {}

void PolicyGrads::zero() {
  for (auto* m : {&w1, &w2, &ws, &wp, &vw1, &vw2})
    std::fill(m->w.begin(), m->w.end(), 0.0);
  for (auto* v : {&b1, &b2, &bs, &bp, &vb1, &vb2}) std::fill(v->begin(), v->end(), 0.0);
}

void PolicyGrads::scale(double s) {
  for (auto* m : {&w1, &w2, &ws, &wp, &vw1, &vw2})
    for (double& x : m->w) x *= s;
  for (auto* v : {&b1, &b2, &bs, &bp, &vb1, &vb2})
    for (double& x : *v) x *= s;
}

nn::ConstParamViews PolicyGrads::all_views() const {
  return {w1.w, b1, w2.w, b2, ws.w, bs, wp.w, bp, vw1.w, vb1, vw2.w, vb2};
}

PolicyForward policy_forward(const PolicyParams& p, std::span<const double> emb) {
  if (static_cast<int>(emb.size()) != p.dims.input)
    throw ConfigError("policy_forward: embedding dimension mismatch");
  PolicyForward f;
  f.h1.resize(p.dims.hidden);
  f.h2.resize(p.dims.hidden);
  f.vh.resize(p.dims.value_hidden);
  nn::linear(p.w1, emb, &p.b1, f.h1);
  nn::tanh_inplace(f.h1);
  nn::linear(p.w2, f.h1, &p.b2, f.h2);
  nn::tanh_inplace(f.h2);
  nn::linear(p.ws, f.h2, &p.bs, f.logits_s);
  nn::linear(p.wp, f.h2, &p.bp, f.logits_p);
  nn::softmax(f.logits_s, f.dist.speed_probs);
  nn::softmax(f.logits_p, f.dist.path_probs);
  nn::linear(p.vw1, f.h2, &p.vb1, f.vh);
  nn::tanh_inplace(f.vh);
  f.value = kernels::ops().dot(p.vw2.row(0), f.vh.data(), f.vh.size()) + p.vb2[0];
  return f;
}

std::pair<MetaAction, double> sample_action(const ActionDistribution& dist, Rng& rng) {
  int s = rng.categorical(dist.speed_probs);
  int p = rng.categorical(dist.path_probs);
  MetaAction a{static_cast<SpeedAction>(s), static_cast<PathAction>(p)};
  return {a, dist.logprob(a)};
}

void policy_backward(const PolicyParams& p, std::span<const double> emb,
                     const PolicyForward& f, std::span<const double> dls,
                     std::span<const double> dlp, double dvalue, PolicyGrads& g) {
  const auto& ops = kernels::ops();
  std::vector<double> dh2(p.dims.hidden, 0.0);

  // Decision heads -> h2.
  std::vector<double> tmp(p.dims.hidden);
  ops.matvec_t(p.ws.w.data(), dls.data(), tmp.data(), kNumSpeedActions, p.dims.hidden);
  ops.axpy(1.0, tmp.data(), dh2.data(), p.dims.hidden);
  ops.matvec_t(p.wp.w.data(), dlp.data(), tmp.data(), kNumPathActions, p.dims.hidden);
  ops.axpy(1.0, tmp.data(), dh2.data(), p.dims.hidden);
  for (int i = 0; i < kNumSpeedActions; ++i) {
    ops.axpy(dls[i], f.h2.data(), g.ws.row(i), p.dims.hidden);
    g.bs[i] += dls[i];
  }
  for (int i = 0; i < kNumPathActions; ++i) {
    ops.axpy(dlp[i], f.h2.data(), g.wp.row(i), p.dims.hidden);
    g.bp[i] += dlp[i];
  }

  // Value head; its gradient stops at h2 (no trunk contribution).
  if (dvalue != 0.0) {
    ops.axpy(dvalue, f.vh.data(), g.vw2.row(0), p.dims.value_hidden);
    g.vb2[0] += dvalue;
    std::vector<double> dvh(p.dims.value_hidden);
    for (int i = 0; i < p.dims.value_hidden; ++i) {
      dvh[i] = dvalue * p.vw2.row(0)[i] * (1.0 - f.vh[i] * f.vh[i]);
    }
    for (int i = 0; i < p.dims.value_hidden; ++i) {
      ops.axpy(dvh[i], f.h2.data(), g.vw1.row(i), p.dims.hidden);
      g.vb1[i] += dvh[i];
    }
  }

  // Trunk.
  std::vector<double> da2(p.dims.hidden);
  for (int i = 0; i < p.dims.hidden; ++i) da2[i] = dh2[i] * (1.0 - f.h2[i] * f.h2[i]);
  std::vector<double> dh1(p.dims.hidden);
  ops.matvec_t(p.w2.w.data(), da2.data(), dh1.data(), p.dims.hidden, p.dims.hidden);
  ops.outer_acc(1.0, da2.data(), f.h1.data(), g.w2.w.data(), p.dims.hidden, p.dims.hidden);
  for (int i = 0; i < p.dims.hidden; ++i) g.b2[i] += da2[i];

  std::vector<double> da1(p.dims.hidden);
  for (int i = 0; i < p.dims.hidden; ++i) da1[i] = dh1[i] * (1.0 - f.h1[i] * f.h1[i]);
  ops.outer_acc(1.0, da1.data(), emb.data(), g.w1.w.data(), p.dims.hidden, p.dims.input);
  for (int i = 0; i < p.dims.hidden; ++i) g.b1[i] += da1[i];
}

double ce_loss(std::span<const CeBatchItem> batch, const PolicyParams& params) {
  if (batch.empty()) throw ArgumentError("ce_loss: empty batch");
  double total = 0.0;
  for (const CeBatchItem& item : batch) {
    PolicyForward f = policy_forward(params, item.emb);
    total -= f.dist.logprob(item.label);
  }
  return total / static_cast<double>(batch.size());
}

double ce_loss_and_grad(std::span<const CeBatchItem> batch, const PolicyParams& params,
                        PolicyGrads& grads) {
  if (batch.empty()) throw ArgumentError("ce_loss: empty batch");
  double total = 0.0;
  double inv_n = 1.0 / static_cast<double>(batch.size());
  std::array<double, kNumSpeedActions> dls;
  std::array<double, kNumPathActions> dlp;
  for (const CeBatchItem& item : batch) {
    PolicyForward f = policy_forward(params, item.emb);
    total -= f.dist.logprob(item.label);
    for (int i = 0; i < kNumSpeedActions; ++i) {
      dls[i] = (f.dist.speed_probs[i] -
                (i == static_cast<int>(item.label.speed) ? 1.0 : 0.0)) *
               inv_n;
    }
    for (int i = 0; i < kNumPathActions; ++i) {
      dlp[i] = (f.dist.path_probs[i] -
                (i == static_cast<int>(item.label.path) ? 1.0 : 0.0)) *
               inv_n;
    }
    policy_backward(params, item.emb, f, dls, dlp, 0.0, grads);
  }
  return total * inv_n;
}

double kl_to_reference(std::span<const double> emb, const PolicyParams& params,
                       const PolicyParams& ref_params) {
  PolicyForward f = policy_forward(params, emb);
  PolicyForward fr = policy_forward(ref_params, emb);
  double kl = 0.0;
  for (int i = 0; i < kNumSpeedActions; ++i) {
    kl += fr.dist.speed_probs[i] *
          (std::log(fr.dist.speed_probs[i]) - std::log(f.dist.speed_probs[i]));
  }
  for (int i = 0; i < kNumPathActions; ++i) {
    kl += fr.dist.path_probs[i] *
          (std::log(fr.dist.path_probs[i]) - std::log(f.dist.path_probs[i]));
  }
  return kl;
}

}  // namespace driveloop
