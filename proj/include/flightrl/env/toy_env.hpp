#pragma once

#include <cstdint>

#include "flightrl/rng.hpp"
#include "flightrl/types.hpp"

namespace flightrl::env {

// Double-integrator target-reaching task used to sanity-check the learner
// end to end in seconds: reach a randomly drawn setpoint and stay there.
// Same reward convention as the flight tasks (bounded in [-1, 0]).
class ToyEnv {
 public:
  static constexpr double kDt = 0.05;          // s
  static constexpr double kAccelMax = 1.0;     // action scales to +-this
  static constexpr double kTargetRange = 2.0;  // target drawn U[-2, 2]
  static constexpr double kErrorScale = 1.0;   // error that saturates the cost

  explicit ToyEnv(std::uint64_t seed) : rng_(seed) {}

  Eigen::Vector2d reset();

  struct Step {
    Eigen::Vector2d obs;
    double reward = 0.0;
  };
  Step step(double action);

  double position() const { return x_; }
  double velocity() const { return v_; }
  double target() const { return target_; }

 private:
  Eigen::Vector2d make_obs() const { return {target_ - x_, v_}; }

  Rng rng_;
  double x_ = 0.0, v_ = 0.0, target_ = 0.0;
};

// The analytic yardstick: saturated PD on the same observation. Gains are
// grid-searched by the benchmark harness.
double pd_action(const Eigen::Vector2d& obs, double kp, double kd);

}  // namespace flightrl::env
