#pragma once

#include <cstdint>

#include "flightrl/sim/aircraft.hpp"
#include "flightrl/sim/faults.hpp"

namespace flightrl::sim {

// First-order actuators with travel limits. The asymmetric elevator band
// matches the modeled airframe's tail geometry.
struct ActuatorConfig {
  double elevator_min = deg2rad(-20.05);
  double elevator_max = deg2rad(14.90);
  double aileron_limit = deg2rad(20.0);
  double rudder_limit = deg2rad(22.0);
  double time_constant = 1.0 / 30.0;  // s

  void validate() const;
};

// Washed-out yaw-rate feedback to the rudder, summed with the commanded
// deflection; keeps the bare airframe's dutch roll acceptable so the
// attitude agent does not have to learn it.
struct YawDamperConfig {
  bool enabled = true;
  double gain = 0.5;         // rudder per yaw rate, rad/(rad/s)
  double washout_tau = 1.0;  // s; steady turns pass through unharmed
};

// PI(D) auto-throttle holding the airspeed set at reset, with a static trim
// feedforward and conditional anti-windup.
struct AutothrottleConfig {
  bool enabled = true;
  double kp = 6000.0;  // N per m/s
  double ki = 50.0;    // N per m
  double kd = 0.0;     // N per m/s^2
  double thrust_max = 16000.0;  // N (per-airframe rating)

  void validate() const;
};

struct SimConfig {
  AeroModel aero;
  ActuatorConfig actuators;
  YawDamperConfig damper;
  AutothrottleConfig throttle;
  double dt = 0.01;  // s
  fault::FailureSpec failure;
  fault::GustSpec gust;

  void validate() const;
};

// Discrete-time closed plant: commanded surfaces pass through the yaw damper
// sum, the actuator lags, and the failure transform before the rigid body is
// integrated one RK4 step. Sampled-data automatics (damper, throttle) update
// once per step from the pre-step state.
class Simulator {
 public:
  explicit Simulator(SimConfig cfg);

  // Straight-and-level start from the longitudinal trim solution at the
  // given flight condition; actuators settle at trim, throttle integrator
  // cleared, thrust at the trim value.
  const AircraftState& reset(double altitude_m, double airspeed_mps);

  // Advance one tick. Throws UsageError when called after an abort.
  const AircraftState& step(const Surfaces& commanded);

  const AircraftState& state() const { return x_; }
  double time() const { return t_; }
  bool aborted() const { return aborted_; }

  // Actuator positions (pre-failure) and what the plant actually saw during
  // the last step (post-failure).
  const Surfaces& actuator_positions() const { return act_; }
  const Surfaces& effective_surfaces() const { return effective_; }
  double thrust() const { return thrust_; }
  double airspeed_setpoint() const { return v_set_; }
  const SimConfig& config() const { return cfg_; }

  // Scenario hooks for tests and trimmed starts.
  void set_state(const AircraftState& x) { x_ = x; }
  void set_actuators(const Surfaces& s) { act_ = s; }
  void set_thrust(double thrust) { thrust_ = thrust; }

 private:
  SimConfig cfg_;
  AircraftState x_;
  Surfaces act_;        // actuator positions
  Surfaces effective_;  // post-failure surfaces used in the last step
  double thrust_ = 0.0;
  std::int64_t ticks_ = 0;  // time kept as a count so t = n * dt stays exact
  double t_ = 0.0;
  bool aborted_ = false;

  // automatics state
  double washout_state_ = 0.0;  // low-pass of yaw rate; (r - state) is washed-out r
  double v_set_ = 0.0;
  double v_prev_ = 0.0;
  double throttle_integral_ = 0.0;
  double thrust_ff_ = 0.0;
};

}  // namespace flightrl::sim
