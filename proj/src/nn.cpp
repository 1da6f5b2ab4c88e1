#include "driveloop/nn.hpp"

#include <algorithm>
#include <cmath>

#include "driveloop/error.hpp"

namespace driveloop::nn {

void init_uniform(Mat& m, Rng& rng) {
  double bound = 1.0 / std::sqrt(static_cast<double>(std::max(m.cols, 1)));
  for (double& w : m.w) w = rng.uniform(-bound, bound);
}

void init_zero(std::vector<double>& v) { std::fill(v.begin(), v.end(), 0.0); }

void softmax(std::span<const double> logits, std::span<double> probs) {
  double mx = -1e300;
  for (double l : logits) mx = std::max(mx, l);
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - mx);
    sum += probs[i];
  }
  for (double& p : probs) p /= sum;
}

double log_sum_exp(std::span<const double> logits) {
  double mx = -1e300;
  for (double l : logits) mx = std::max(mx, l);
  double sum = 0.0;
  for (double l : logits) sum += std::exp(l - mx);
  return mx + std::log(sum);
}

std::size_t total_size(const ConstParamViews& views) {
  std::size_t n = 0;
  for (const auto& v : views) n += v.size();
  return n;
}

std::vector<double> flatten(const ConstParamViews& views) {
  std::vector<double> out;
  out.reserve(total_size(views));
  for (const auto& v : views) out.insert(out.end(), v.begin(), v.end());
  return out;
}

void unflatten(std::span<const double> flat, const ParamViews& views) {
  std::size_t off = 0;
  for (const auto& v : views) {
    if (off + v.size() > flat.size())
      throw ConfigError("unflatten: parameter size mismatch");
    std::copy(flat.begin() + off, flat.begin() + off + v.size(), v.begin());
    off += v.size();
  }
  if (off != flat.size()) throw ConfigError("unflatten: parameter size mismatch");
}

void Adam::update(const ParamViews& params, const ConstParamViews& grads) {
  std::size_t n = 0;
  for (const auto& p : params) n += p.size();
  if (m_.empty()) {
    m_.assign(n, 0.0);
    v_.assign(n, 0.0);
  } else if (m_.size() != n) {
    throw ConfigError("Adam: parameter structure changed between updates");
  }
  ++step_;
  double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
  double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
  std::size_t off = 0;
  for (std::size_t b = 0; b < params.size(); ++b) {
    auto& p = params[b];
    auto& g = grads[b];
    for (std::size_t i = 0; i < p.size(); ++i) {
      std::size_t k = off + i;
      m_[k] = beta1_ * m_[k] + (1.0 - beta1_) * g[i];
      v_[k] = beta2_ * v_[k] + (1.0 - beta2_) * g[i] * g[i];
      double mhat = m_[k] / bc1;
      double vhat = v_[k] / bc2;
      p[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
    }
    off += p.size();
  }
}

}  // namespace driveloop::nn
