#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "driveloop/nn.hpp"

namespace driveloop::testing {

struct GradCheckResult {
  double max_rel_error = 0.0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

// Central finite differences over every parameter coordinate. `views` must
// alias the parameters the loss reads; `grads` the matching analytic gradient.
inline GradCheckResult check_gradient(const nn::ParamViews& views,
                                      const nn::ConstParamViews& grads,
                                      const std::function<double()>& loss,
                                      double h = 1e-5) {
  GradCheckResult result;
  for (std::size_t b = 0; b < views.size(); ++b) {
    auto view = views[b];
    auto grad = grads[b];
    for (std::size_t i = 0; i < view.size(); ++i) {
      double saved = view[i];
      view[i] = saved + h;
      double fp = loss();
      view[i] = saved - h;
      double fm = loss();
      view[i] = saved;
      double numeric = (fp - fm) / (2.0 * h);
      double denom = std::max({std::abs(numeric), std::abs(grad[i]), 1e-8});
      double rel = std::abs(numeric - grad[i]) / denom;
      if (rel > result.max_rel_error) {
        result.max_rel_error = rel;
        result.worst_analytic = grad[i];
        result.worst_numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace driveloop::testing
