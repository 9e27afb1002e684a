#pragma once

#include <cstdint>

#include "flightrl/nn/network.hpp"

namespace flightrl::nn {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First/second moment estimates, shaped like the network they optimize.
struct AdamState {
  std::vector<LayerParams> m;
  std::vector<LayerParams> v;
  std::int64_t step = 0;

  static AdamState for_network(const NetworkParams& p);
};

// One Adam update with bias correction, minimizing along `grads`.
// `lr` is supplied per call so the caller owns any schedule.
void adam_step(NetworkParams& params, const Gradients& grads, AdamState& st, double lr,
               const AdamConfig& cfg = {});

// Scalar variant (used for the entropy temperature).
struct ScalarAdam {
  double m = 0.0;
  double v = 0.0;
  std::int64_t step = 0;
};

double adam_step(double value, double grad, ScalarAdam& st, double lr,
                 const AdamConfig& cfg = {});

// Piecewise-linear learning-rate schedule: `initial` at step 0 decaying to
// `final` at `decay_steps`, constant afterwards. decay_steps == 0 means a
// constant rate.
struct LrSchedule {
  double initial = 3e-4;
  double final_value = 3e-4;
  std::int64_t decay_steps = 0;

  double at(std::int64_t step) const {
    if (decay_steps <= 0) return initial;
    if (step >= decay_steps) return final_value;
    const double f = static_cast<double>(step) / static_cast<double>(decay_steps);
    return initial + f * (final_value - initial);
  }
};

}  // namespace flightrl::nn
