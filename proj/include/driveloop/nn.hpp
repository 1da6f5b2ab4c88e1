#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "driveloop/kernels.hpp"
#include "driveloop/rng.hpp"

namespace driveloop::nn {

// Row-major dense matrix. A bias vector is a Mat with cols == 1 conceptually;
// we just use std::vector<double> for vectors.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> w;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), w(static_cast<std::size_t>(r) * c, 0.0) {}
  double* row(int i) { return w.data() + static_cast<std::size_t>(i) * cols; }
  const double* row(int i) const { return w.data() + static_cast<std::size_t>(i) * cols; }
  std::size_t size() const { return w.size(); }
};

// Uniform in +-1/sqrt(fan_in), the fan-in being the column count.
void init_uniform(Mat& m, Rng& rng);
void init_zero(std::vector<double>& v);

// y = W x + b (b optional).
inline void linear(const Mat& w, std::span<const double> x,
                   const std::vector<double>* b, std::span<double> y) {
  kernels::ops().matvec(w.w.data(), x.data(), b ? b->data() : nullptr, y.data(),
                        w.rows, w.cols);
}

inline void tanh_inplace(std::span<double> v) {
  for (double& x : v) x = std::tanh(x);
}

// Max-subtracted softmax; probabilities are strictly positive.
void softmax(std::span<const double> logits, std::span<double> probs);

double log_sum_exp(std::span<const double> logits);

// A parameter set is an ordered list of views over the underlying blocks;
// optimizers, serialization, and finite differencing all iterate this order.
using ParamViews = std::vector<std::span<double>>;
using ConstParamViews = std::vector<std::span<const double>>;

std::size_t total_size(const ConstParamViews& views);
std::vector<double> flatten(const ConstParamViews& views);
void unflatten(std::span<const double> flat, const ParamViews& views);

// Adam with bias correction. State is sized on first update; the block
// structure must not change across calls.
class Adam {
 public:
  explicit Adam(double lr, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void update(const ParamViews& params, const ConstParamViews& grads);

  double lr() const { return lr_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  long step_ = 0;
  std::vector<double> m_, v_;
};

}  // namespace driveloop::nn
