#pragma once

#include <Eigen/Dense>

#include "flightrl/sim/simulator.hpp"
#include "flightrl/types.hpp"

namespace flightrl::env {

// Reward and action-mapping arithmetic shared by the tracking environments.
// Rewards are bounded in [-1, 0] by construction so episode returns stay
// comparable across tasks.

// Attitude tracking errors are ordered [sideslip, pitch, roll] and weighted
// with (6/pi) * [4, 1, 1]: a quarter-turn of roll or pitch error, or a
// sixth of that in sideslip, saturates its cost share.
inline Eigen::Vector3d attitude_error_weights() {
  return (6.0 / kPi) * Eigen::Vector3d(4.0, 1.0, 1.0);
}

// How per-component costs are bounded. `absolute` clips |c * e| into [0, 1]
// (both error signs penalized); `one_sided` clips c * e into [-1, 0] and is
// kept as a switchable variant because the two differ for negative errors.
enum class CostClipMode { absolute, one_sided };

// r = -(1/3) sum_i clip(...) in [-1, 0].
double attitude_reward(const Eigen::Vector3d& error_rad,
                       CostClipMode mode = CostClipMode::absolute);

// r = -clip(|h_err| / 240, 0, 1).
double altitude_reward(double altitude_error_m);
inline constexpr double kAltitudeErrorScale = 240.0;  // m

// Incremental attitude action map: a in [-1,1]^3 -> surface-rate increments
// per tick, bounded at 1/100 of the corresponding actuator travel per
// channel (elevator uses its asymmetric band).
Eigen::Vector3d attitude_increment(const Eigen::Vector3d& action,
                                   const sim::ActuatorConfig& act);

// Incremental pitch-reference map: a in [-1,1] -> delta theta_ref per tick,
// symmetric, reaching `rate_limit_deg_s` at full deflection.
double pitch_ref_increment(double action, double dt,
                           double rate_limit_deg_s = 10.0);

// Attitude observation: [weighted errors (3); integrated surface commands
// (3); body rates p, q, r]. Errors enter pre-weighted so the agent sees
// cost-scaled quantities.
Eigen::Matrix<double, 9, 1> attitude_observation(const Eigen::Vector3d& weighted_error,
                                                 const Eigen::Vector3d& surface_cmd,
                                                 double p, double q, double r);

// Altitude observation: [h_err / 240, theta_ref].
Eigen::Vector2d altitude_observation(double altitude_error_m, double theta_ref);

}  // namespace flightrl::env
