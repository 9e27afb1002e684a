#include "flightrl/env/tracking.hpp"

#include <algorithm>
#include <cmath>

namespace flightrl::env {

double attitude_reward(const Eigen::Vector3d& error_rad, CostClipMode mode) {
  const Eigen::Vector3d c = attitude_error_weights();
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (mode == CostClipMode::absolute) {
      sum += std::clamp(std::abs(c[i] * error_rad[i]), 0.0, 1.0);
    } else {
      sum += -std::clamp(c[i] * error_rad[i], -1.0, 0.0);
    }
  }
  return -sum / 3.0;
}

double altitude_reward(double altitude_error_m) {
  return -std::clamp(std::abs(altitude_error_m) / kAltitudeErrorScale, 0.0, 1.0);
}

Eigen::Vector3d attitude_increment(const Eigen::Vector3d& action,
                                   const sim::ActuatorConfig& act) {
  if (action.cwiseAbs().maxCoeff() > 1.0 + 1e-9)
    throw UsageError("attitude_increment: action outside [-1, 1]");
  // Per-tick increment bounds: 1/100 of the full actuator travel, asymmetric
  // for the elevator. a = -1 maps to the lower bound, a = +1 to the upper.
  const double de_lo = act.elevator_min / 100.0, de_hi = act.elevator_max / 100.0;
  const double da = act.aileron_limit / 100.0;
  const double dr = act.rudder_limit / 100.0;
  Eigen::Vector3d inc;
  inc[0] = de_lo + (action[0] + 1.0) * 0.5 * (de_hi - de_lo);
  inc[1] = -da + (action[1] + 1.0) * da;
  inc[2] = -dr + (action[2] + 1.0) * dr;
  return inc;
}

double pitch_ref_increment(double action, double dt, double rate_limit_deg_s) {
  if (std::abs(action) > 1.0 + 1e-9)
    throw UsageError("pitch_ref_increment: action outside [-1, 1]");
  return deg2rad(rate_limit_deg_s) * dt * action;
}

Eigen::Matrix<double, 9, 1> attitude_observation(const Eigen::Vector3d& weighted_error,
                                                 const Eigen::Vector3d& surface_cmd,
                                                 double p, double q, double r) {
  Eigen::Matrix<double, 9, 1> obs;
  obs << weighted_error, surface_cmd, p, q, r;
  return obs;
}

Eigen::Vector2d altitude_observation(double altitude_error_m, double theta_ref) {
  return {altitude_error_m / kAltitudeErrorScale, theta_ref};
}

}  // namespace flightrl::env
