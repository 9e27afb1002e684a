#include "flightrl/env/toy_env.hpp"

#include <algorithm>
#include <cmath>

namespace flightrl::env {

Eigen::Vector2d ToyEnv::reset() {
  x_ = 0.0;
  v_ = 0.0;
  target_ = rng_.uniform(-kTargetRange, kTargetRange);
  return make_obs();
}

ToyEnv::Step ToyEnv::step(double action) {
  const double a = std::clamp(action, -1.0, 1.0) * kAccelMax;
  v_ += a * kDt;  // semi-implicit Euler keeps the toy well behaved
  x_ += v_ * kDt;
  Step out;
  out.obs = make_obs();
  out.reward = -std::clamp(std::abs(target_ - x_) / kErrorScale, 0.0, 1.0);
  return out;
}

double pd_action(const Eigen::Vector2d& obs, double kp, double kd) {
  return std::clamp(kp * obs[0] - kd * obs[1], -1.0, 1.0);
}

}  // namespace flightrl::env
