#include "driveloop/decoder.hpp"

#include <cmath>

#include "driveloop/error.hpp"

namespace driveloop {

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct GruStep {
  std::vector<double> h_prev, zg, r, c;
};

// Full forward trace kept for backprop.
struct DecodeTrace {
  std::vector<double> cond;       // [emb; onehot]
  std::vector<double> he;         // condition encoder activation
  std::vector<double> mu, logvar, z;
  std::vector<double> h0;
  std::vector<GruStep> steps;     // kPathWaypoints entries
  std::vector<std::vector<double>> h;  // h[t], t = 0..kPathWaypoints
  std::array<Vec2, kPathWaypoints> path_delta;
  std::array<Vec2, kSpeedWaypoints> speed_delta;
  Trajectory traj;
};

DecodeTrace run_forward(const DecoderParams& p, std::span<const double> emb,
                        MetaAction meta, std::span<const double> eps) {
  if (static_cast<int>(emb.size()) != p.dims.emb)
    throw ConfigError("decode: embedding dimension mismatch");
  if (!p.finite()) throw NumericError("decode: non-finite decoder parameters");

  const auto& ops = kernels::ops();
  const int H = p.dims.hidden;
  const int Z = p.dims.latent;
  DecodeTrace tr;

  tr.cond.assign(p.dims.emb + kMetaOneHot, 0.0);
  std::copy(emb.begin(), emb.end(), tr.cond.begin());
  tr.cond[p.dims.emb + static_cast<int>(meta.speed)] = 1.0;
  tr.cond[p.dims.emb + kNumSpeedActions + static_cast<int>(meta.path)] = 1.0;

  tr.he.resize(p.dims.cond_hidden);
  nn::linear(p.ew, tr.cond, &p.eb, tr.he);
  nn::tanh_inplace(tr.he);
  tr.mu.resize(Z);
  tr.logvar.resize(Z);
  nn::linear(p.mw, tr.he, &p.mb, tr.mu);
  nn::linear(p.lw, tr.he, &p.lb, tr.logvar);

  tr.z = tr.mu;
  if (!eps.empty()) {
    for (int i = 0; i < Z; ++i) tr.z[i] += std::exp(0.5 * tr.logvar[i]) * eps[i];
  }

  tr.h0.resize(H);
  nn::linear(p.hw, tr.z, &p.hb, tr.h0);
  nn::tanh_inplace(tr.h0);

  tr.h.resize(kPathWaypoints + 1);
  tr.h[0] = tr.h0;
  tr.steps.resize(kPathWaypoints);
  std::vector<double> u(H + Z), uc(H + Z), pre(H);
  for (int t = 0; t < kPathWaypoints; ++t) {
    GruStep& st = tr.steps[t];
    st.h_prev = tr.h[t];
    std::copy(st.h_prev.begin(), st.h_prev.end(), u.begin());
    std::copy(tr.z.begin(), tr.z.end(), u.begin() + H);

    st.zg.resize(H);
    nn::linear(p.wz, u, &p.bz, pre);
    for (int i = 0; i < H; ++i) st.zg[i] = sigmoid(pre[i]);
    st.r.resize(H);
    nn::linear(p.wr, u, &p.br, pre);
    for (int i = 0; i < H; ++i) st.r[i] = sigmoid(pre[i]);

    for (int i = 0; i < H; ++i) uc[i] = st.r[i] * st.h_prev[i];
    std::copy(tr.z.begin(), tr.z.end(), uc.begin() + H);
    st.c.resize(H);
    nn::linear(p.wc, uc, &p.bc, st.c);
    nn::tanh_inplace(st.c);

    tr.h[t + 1].resize(H);
    for (int i = 0; i < H; ++i) {
      tr.h[t + 1][i] = (1.0 - st.zg[i]) * st.h_prev[i] + st.zg[i] * st.c[i];
    }

    double out[2];
    ops.matvec(p.pw.w.data(), tr.h[t + 1].data(), p.pb.data(), out, 2, H);
    tr.path_delta[t] = {out[0], out[1]};
    if (t < kSpeedWaypoints) {
      ops.matvec(p.sw.w.data(), tr.h[t + 1].data(), p.sb.data(), out, 2, H);
      tr.speed_delta[t] = {out[0], out[1]};
    }
  }

  Vec2 acc{0.0, 0.0};
  for (int t = 0; t < kPathWaypoints; ++t) {
    acc += tr.path_delta[t];
    tr.traj.path[t] = acc;
  }
  acc = {0.0, 0.0};
  for (int t = 0; t < kSpeedWaypoints; ++t) {
    acc += tr.speed_delta[t];
    tr.traj.speed[t] = acc;
  }
  return tr;
}

}  // namespace

DecoderParams DecoderParams::init(const DecoderDims& dims, std::uint64_t seed) {
  DecoderParams p;
  p.dims = dims;
  Rng rng(derive_seed(seed, "decoder-init"));
  const int H = dims.hidden, Z = dims.latent;
  p.ew = nn::Mat(dims.cond_hidden, dims.emb + kMetaOneHot);
  p.mw = nn::Mat(Z, dims.cond_hidden);
  p.lw = nn::Mat(Z, dims.cond_hidden);
  p.hw = nn::Mat(H, Z);
  p.wz = nn::Mat(H, H + Z);
  p.wr = nn::Mat(H, H + Z);
  p.wc = nn::Mat(H, H + Z);
  p.pw = nn::Mat(2, H);
  p.sw = nn::Mat(2, H);
  p.eb.assign(dims.cond_hidden, 0.0);
  p.mb.assign(Z, 0.0);
  p.lb.assign(Z, 0.0);
  p.hb.assign(H, 0.0);
  p.bz.assign(H, 0.0);
  p.br.assign(H, 0.0);
  p.bc.assign(H, 0.0);
  p.pb.assign(2, 0.0);
  p.sb.assign(2, 0.0);
  for (nn::Mat* m : {&p.ew, &p.mw, &p.lw, &p.hw, &p.wz, &p.wr, &p.wc, &p.pw, &p.sw}) {
    nn::init_uniform(*m, rng);
  }
  return p;
}

nn::ParamViews DecoderParams::all_views() {
  return {ew.w, eb, mw.w, mb, lw.w, lb, hw.w, hb, wz.w, bz,
          wr.w, br, wc.w, bc, pw.w, pb, sw.w, sb};
}

nn::ConstParamViews DecoderParams::all_views() const {
  return {ew.w, eb, mw.w, mb, lw.w, lb, hw.w, hb, wz.w, bz,
          wr.w, br, wc.w, bc, pw.w, pb, sw.w, sb};
}

bool DecoderParams::finite() const {
  for (const auto& view : all_views()) {
    for (double v : view) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

DecoderGrads::DecoderGrads(const DecoderDims& d)
    : ew(d.cond_hidden, d.emb + kMetaOneHot),
      mw(d.latent, d.cond_hidden),
      lw(d.latent, d.cond_hidden),
      hw(d.hidden, d.latent),
      wz(d.hidden, d.hidden + d.latent),
      wr(d.hidden, d.hidden + d.latent),
      wc(d.hidden, d.hidden + d.latent),
      pw(2, d.hidden),
      sw(2, d.hidden),
      eb(d.cond_hidden, 0.0),
      mb(d.latent, 0.0),
      lb(d.latent, 0.0),
      hb(d.hidden, 0.0),
      bz(d.hidden, 0.0),
      br(d.hidden, 0.0),
      bc(d.hidden, 0.0),
      pb(2, 0.0),
      sb(2, 0.0) {}

void DecoderGrads::zero() {
  for (nn::Mat* m : {&ew, &mw, &lw, &hw, &wz, &wr, &wc, &pw, &sw})
    std::fill(m->w.begin(), m->w.end(), 0.0);
  for (std::vector<double>* v : {&eb, &mb, &lb, &hb, &bz, &br, &bc, &pb, &sb})
    std::fill(v->begin(), v->end(), 0.0);
}

nn::ConstParamViews DecoderGrads::all_views() const {
  return {ew.w, eb, mw.w, mb, lw.w, lb, hw.w, hb, wz.w, bz,
          wr.w, br, wc.w, bc, pw.w, pb, sw.w, sb};
}

Trajectory decode(const DecoderParams& params, std::span<const double> emb,
                  MetaAction meta, const DecodeOptions& options) {
  std::vector<double> eps;
  if (!options.deterministic) {
    if (!options.rng) throw ArgumentError("decode: stochastic mode needs an rng");
    eps.resize(params.dims.latent);
    for (double& e : eps) e = options.rng->normal();
  }
  return run_forward(params, emb, meta, eps).traj;
}

double vae_kl(std::span<const double> mu, std::span<const double> logvar) {
  if (mu.size() != logvar.size()) throw ArgumentError("vae_kl: length mismatch");
  double kl = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!std::isfinite(mu[i]) || !std::isfinite(logvar[i]))
      throw NumericError("vae_kl: non-finite input");
    kl += std::exp(logvar[i]) + mu[i] * mu[i] - 1.0 - logvar[i];
  }
  return 0.5 * kl;
}

DecoderLossParts decoder_loss(const DecoderParams& params, std::span<const double> emb,
                              MetaAction meta, const Trajectory& target,
                              std::span<const double> eps, double kl_weight) {
  DecodeTrace tr = run_forward(params, emb, meta, eps);
  DecoderLossParts parts;
  constexpr int kTotalWp = kPathWaypoints + kSpeedWaypoints;
  for (int t = 0; t < kPathWaypoints; ++t) {
    parts.bc += std::abs(tr.traj.path[t].x - target.path[t].x) +
                std::abs(tr.traj.path[t].y - target.path[t].y);
  }
  for (int t = 0; t < kSpeedWaypoints; ++t) {
    parts.bc += std::abs(tr.traj.speed[t].x - target.speed[t].x) +
                std::abs(tr.traj.speed[t].y - target.speed[t].y);
  }
  parts.bc /= kTotalWp;
  parts.kl = vae_kl(tr.mu, tr.logvar);
  parts.total = parts.bc + kl_weight * parts.kl;
  return parts;
}

DecoderLossParts decoder_loss_and_grad(const DecoderParams& p,
                                       std::span<const double> emb, MetaAction meta,
                                       const Trajectory& target,
                                       std::span<const double> eps, double kl_weight,
                                       double weight, DecoderGrads& g) {
  const auto& ops = kernels::ops();
  const int H = p.dims.hidden;
  const int Z = p.dims.latent;
  DecodeTrace tr = run_forward(p, emb, meta, eps);

  DecoderLossParts parts;
  constexpr int kTotalWp = kPathWaypoints + kSpeedWaypoints;
  const double wp_scale = weight / kTotalWp;

  // d loss / d position, then suffix-sum into d loss / d displacement.
  std::array<Vec2, kPathWaypoints> dpath{};
  std::array<Vec2, kSpeedWaypoints> dspeed{};
  auto sgn = [](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); };
  for (int t = 0; t < kPathWaypoints; ++t) {
    Vec2 d{tr.traj.path[t].x - target.path[t].x, tr.traj.path[t].y - target.path[t].y};
    parts.bc += std::abs(d.x) + std::abs(d.y);
    dpath[t] = {sgn(d.x) * wp_scale, sgn(d.y) * wp_scale};
  }
  for (int t = 0; t < kSpeedWaypoints; ++t) {
    Vec2 d{tr.traj.speed[t].x - target.speed[t].x,
           tr.traj.speed[t].y - target.speed[t].y};
    parts.bc += std::abs(d.x) + std::abs(d.y);
    dspeed[t] = {sgn(d.x) * wp_scale, sgn(d.y) * wp_scale};
  }
  parts.bc /= kTotalWp;
  parts.kl = vae_kl(tr.mu, tr.logvar);
  parts.total = parts.bc + kl_weight * parts.kl;

  for (int t = kPathWaypoints - 2; t >= 0; --t) dpath[t] += dpath[t + 1];
  for (int t = kSpeedWaypoints - 2; t >= 0; --t) dspeed[t] += dspeed[t + 1];

  // BPTT.
  std::vector<double> dh(H, 0.0), dz(Z, 0.0);
  std::vector<double> dhead(2), tmpH(H), da(H), du(H + Z), uc(H + Z);
  for (int t = kPathWaypoints - 1; t >= 0; --t) {
    const GruStep& st = tr.steps[t];
    const std::vector<double>& ht = tr.h[t + 1];

    // Displacement heads at step t.
    dhead[0] = dpath[t].x;
    dhead[1] = dpath[t].y;
    ops.outer_acc(1.0, dhead.data(), ht.data(), g.pw.w.data(), 2, H);
    g.pb[0] += dhead[0];
    g.pb[1] += dhead[1];
    ops.matvec_t(p.pw.w.data(), dhead.data(), tmpH.data(), 2, H);
    ops.axpy(1.0, tmpH.data(), dh.data(), H);
    if (t < kSpeedWaypoints) {
      dhead[0] = dspeed[t].x;
      dhead[1] = dspeed[t].y;
      ops.outer_acc(1.0, dhead.data(), ht.data(), g.sw.w.data(), 2, H);
      g.sb[0] += dhead[0];
      g.sb[1] += dhead[1];
      ops.matvec_t(p.sw.w.data(), dhead.data(), tmpH.data(), 2, H);
      ops.axpy(1.0, tmpH.data(), dh.data(), H);
    }

    // GRU cell backward: dh is d loss / d h_t.
    std::vector<double> dh_prev(H, 0.0);
    std::vector<double> dzg(H), dc(H);
    for (int i = 0; i < H; ++i) {
      dzg[i] = dh[i] * (st.c[i] - st.h_prev[i]);
      dc[i] = dh[i] * st.zg[i];
      dh_prev[i] = dh[i] * (1.0 - st.zg[i]);
    }

    std::copy(st.h_prev.begin(), st.h_prev.end(), du.begin());
    std::copy(tr.z.begin(), tr.z.end(), du.begin() + H);

    // Candidate gate.
    for (int i = 0; i < H; ++i) da[i] = dc[i] * (1.0 - st.c[i] * st.c[i]);
    for (int i = 0; i < H; ++i) uc[i] = st.r[i] * st.h_prev[i];
    std::copy(tr.z.begin(), tr.z.end(), uc.begin() + H);
    ops.outer_acc(1.0, da.data(), uc.data(), g.wc.w.data(), H, H + Z);
    for (int i = 0; i < H; ++i) g.bc[i] += da[i];
    std::vector<double> duc(H + Z);
    ops.matvec_t(p.wc.w.data(), da.data(), duc.data(), H, H + Z);
    std::vector<double> dr(H);
    for (int i = 0; i < H; ++i) {
      dr[i] = duc[i] * st.h_prev[i];
      dh_prev[i] += duc[i] * st.r[i];
    }
    for (int i = 0; i < Z; ++i) dz[i] += duc[H + i];

    // Update gate.
    for (int i = 0; i < H; ++i) da[i] = dzg[i] * st.zg[i] * (1.0 - st.zg[i]);
    ops.outer_acc(1.0, da.data(), du.data(), g.wz.w.data(), H, H + Z);
    for (int i = 0; i < H; ++i) g.bz[i] += da[i];
    std::vector<double> dgate(H + Z);
    ops.matvec_t(p.wz.w.data(), da.data(), dgate.data(), H, H + Z);
    for (int i = 0; i < H; ++i) dh_prev[i] += dgate[i];
    for (int i = 0; i < Z; ++i) dz[i] += dgate[H + i];

    // Reset gate.
    for (int i = 0; i < H; ++i) da[i] = dr[i] * st.r[i] * (1.0 - st.r[i]);
    ops.outer_acc(1.0, da.data(), du.data(), g.wr.w.data(), H, H + Z);
    for (int i = 0; i < H; ++i) g.br[i] += da[i];
    ops.matvec_t(p.wr.w.data(), da.data(), dgate.data(), H, H + Z);
    for (int i = 0; i < H; ++i) dh_prev[i] += dgate[i];
    for (int i = 0; i < Z; ++i) dz[i] += dgate[H + i];

    dh = std::move(dh_prev);
  }

  // h0 = tanh(Hw z + hb).
  for (int i = 0; i < H; ++i) da[i] = dh[i] * (1.0 - tr.h0[i] * tr.h0[i]);
  ops.outer_acc(1.0, da.data(), tr.z.data(), g.hw.w.data(), H, Z);
  for (int i = 0; i < H; ++i) g.hb[i] += da[i];
  std::vector<double> dz_h0(Z);
  ops.matvec_t(p.hw.w.data(), da.data(), dz_h0.data(), H, Z);
  ops.axpy(1.0, dz_h0.data(), dz.data(), Z);

  // Reparameterization + KL term.
  std::vector<double> dmu(Z), dlogvar(Z, 0.0);
  for (int i = 0; i < Z; ++i) {
    dmu[i] = dz[i] + weight * kl_weight * tr.mu[i];
    if (!eps.empty()) {
      dlogvar[i] = dz[i] * eps[i] * 0.5 * std::exp(0.5 * tr.logvar[i]);
    }
    dlogvar[i] += weight * kl_weight * 0.5 * (std::exp(tr.logvar[i]) - 1.0);
  }

  // Condition encoder.
  ops.outer_acc(1.0, dmu.data(), tr.he.data(), g.mw.w.data(), Z, p.dims.cond_hidden);
  for (int i = 0; i < Z; ++i) g.mb[i] += dmu[i];
  ops.outer_acc(1.0, dlogvar.data(), tr.he.data(), g.lw.w.data(), Z, p.dims.cond_hidden);
  for (int i = 0; i < Z; ++i) g.lb[i] += dlogvar[i];

  std::vector<double> dhe(p.dims.cond_hidden, 0.0), tmpC(p.dims.cond_hidden);
  ops.matvec_t(p.mw.w.data(), dmu.data(), tmpC.data(), Z, p.dims.cond_hidden);
  ops.axpy(1.0, tmpC.data(), dhe.data(), p.dims.cond_hidden);
  ops.matvec_t(p.lw.w.data(), dlogvar.data(), tmpC.data(), Z, p.dims.cond_hidden);
  ops.axpy(1.0, tmpC.data(), dhe.data(), p.dims.cond_hidden);
  std::vector<double> dae(p.dims.cond_hidden);
  for (int i = 0; i < p.dims.cond_hidden; ++i)
    dae[i] = dhe[i] * (1.0 - tr.he[i] * tr.he[i]);
  ops.outer_acc(1.0, dae.data(), tr.cond.data(), g.ew.w.data(), p.dims.cond_hidden,
                p.dims.emb + kMetaOneHot);
  for (int i = 0; i < p.dims.cond_hidden; ++i) g.eb[i] += dae[i];

  return parts;
}

}  // namespace driveloop
