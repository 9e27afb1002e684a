#include "flightrl/nn/adam.hpp"

#include <cmath>

namespace flightrl::nn {

AdamState AdamState::for_network(const NetworkParams& p) {
  AdamState st;
  st.m = zeros_like(p).layers;
  st.v = zeros_like(p).layers;
  return st;
}

void adam_step(NetworkParams& params, const Gradients& grads, AdamState& st, double lr,
               const AdamConfig& cfg) {
  if (grads.layers.size() != params.layers.size() || st.m.size() != params.layers.size())
    throw UsageError("adam_step: shape mismatch between params, grads, and state");

  st.step += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(st.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(st.step));

  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    auto pv = block_views(params.layers[i]);
    auto gv = block_views(grads.layers[i]);
    auto mv = block_views(st.m[i]);
    auto vv = block_views(st.v[i]);
    for (int k = 0; k < 4; ++k) {
      if (pv[k].size() == 0) continue;
      if (pv[k].size() != gv[k].size())
        throw UsageError("adam_step: gradient block shape mismatch");
      mv[k] = cfg.beta1 * mv[k] + (1.0 - cfg.beta1) * gv[k];
      vv[k] = cfg.beta2 * vv[k] + (1.0 - cfg.beta2) * gv[k].square();
      pv[k] -= lr * (mv[k] / bc1) / ((vv[k] / bc2).sqrt() + cfg.eps);
    }
  }
}

double adam_step(double value, double grad, ScalarAdam& st, double lr,
                 const AdamConfig& cfg) {
  st.step += 1;
  st.m = cfg.beta1 * st.m + (1.0 - cfg.beta1) * grad;
  st.v = cfg.beta2 * st.v + (1.0 - cfg.beta2) * grad * grad;
  const double mh = st.m / (1.0 - std::pow(cfg.beta1, static_cast<double>(st.step)));
  const double vh = st.v / (1.0 - std::pow(cfg.beta2, static_cast<double>(st.step)));
  return value - lr * mh / (std::sqrt(vh) + cfg.eps);
}

}  // namespace flightrl::nn
