#include "flightrl/sim/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "flightrl/sim/atmosphere.hpp"

namespace flightrl::sim {

void ActuatorConfig::validate() const {
  if (!(elevator_min < elevator_max))
    throw ConfigError("actuators: elevator_min must be below elevator_max");
  if (aileron_limit <= 0 || rudder_limit <= 0)
    throw ConfigError("actuators: aileron and rudder limits must be positive");
  if (time_constant <= 0) throw ConfigError("actuators: time constant must be positive");
}

void AutothrottleConfig::validate() const {
  if (thrust_max <= 0) throw ConfigError("autothrottle: thrust_max must be positive");
  if (kp < 0 || ki < 0 || kd < 0)
    throw ConfigError("autothrottle: gains must be non-negative");
}

void SimConfig::validate() const {
  aero.validate();
  actuators.validate();
  throttle.validate();
  if (dt <= 0 || dt > 0.1) throw ConfigError("sim: dt must lie in (0, 0.1] s");
  if (damper.enabled && damper.washout_tau <= 0)
    throw ConfigError("yaw damper: washout time constant must be positive");
}

Simulator::Simulator(SimConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

const AircraftState& Simulator::reset(double altitude_m, double airspeed_mps) {
  const TrimResult tr = trim(cfg_.aero, altitude_m, airspeed_mps);
  if (!tr.converged || tr.residual > 1e-6)
    throw NumericError("reset: trim failed to converge at the requested condition");
  x_ = tr.state;
  act_ = tr.surfaces;
  effective_ = tr.surfaces;
  thrust_ = tr.thrust;
  thrust_ff_ = tr.thrust;
  ticks_ = 0;
  t_ = 0.0;
  aborted_ = false;
  washout_state_ = x_.r;
  v_set_ = airspeed_mps;
  v_prev_ = airspeed_mps;
  throttle_integral_ = 0.0;
  return x_;
}

const AircraftState& Simulator::step(const Surfaces& commanded) {
  if (aborted_) throw UsageError("step: simulator aborted; reset before stepping");
  const double dt = cfg_.dt;

  // Yaw damper: washed-out yaw rate, summed onto the commanded rudder.
  Surfaces cmd = commanded;
  if (cfg_.damper.enabled) {
    const double washed_r = x_.r - washout_state_;
    cmd.rudder += -cfg_.damper.gain * washed_r;
    washout_state_ +=
        (1.0 - std::exp(-dt / cfg_.damper.washout_tau)) * (x_.r - washout_state_);
  }

  // First-order actuator lag toward the (limited) commands.
  const auto& lim = cfg_.actuators;
  const double a = 1.0 - std::exp(-dt / lim.time_constant);
  auto track = [a](double pos, double target, double lo, double hi) {
    return std::clamp(pos + a * (std::clamp(target, lo, hi) - pos), lo, hi);
  };
  act_.elevator = track(act_.elevator, cmd.elevator, lim.elevator_min, lim.elevator_max);
  act_.aileron = track(act_.aileron, cmd.aileron, -lim.aileron_limit, lim.aileron_limit);
  act_.rudder = track(act_.rudder, cmd.rudder, -lim.rudder_limit, lim.rudder_limit);

  // Auto-throttle: PI with trim feedforward, derivative on measurement,
  // integration frozen while the command saturates.
  if (cfg_.throttle.enabled) {
    const double v = x_.airspeed();
    const double err = v_set_ - v;
    const double dv = (v - v_prev_) / dt;
    v_prev_ = v;
    const double raw = thrust_ff_ + cfg_.throttle.kp * err +
                       cfg_.throttle.ki * throttle_integral_ - cfg_.throttle.kd * dv;
    const double clamped = std::clamp(raw, 0.0, cfg_.throttle.thrust_max);
    if (raw == clamped) throttle_integral_ += err * dt;
    thrust_ = clamped;
  }

  // Scheduled failure rewrites what the plant actually receives.
  auto [eff, model] = fault::apply_failure(cfg_.failure, t_, act_, cfg_.aero);
  effective_ = eff;

  const auto gust = [this](double tt) {
    return fault::gust_alpha(cfg_.gust, tt, x_.airspeed());
  };
  x_ = rk4_step(x_, effective_, thrust_, model, t_, dt, gust);
  t_ = static_cast<double>(++ticks_) * dt;

  if (!x_.finite() || std::abs(x_.theta) >= kPi / 2.0) aborted_ = true;
  return x_;
}

}  // namespace flightrl::sim
