#include "flightrl/env/cascade_env.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace flightrl::env {
namespace {

bool state_finite(const sim::AircraftState& x) { return x.as_vector().allFinite(); }

Eigen::Vector3d clamp_surfaces(const Eigen::Vector3d& cmd, const sim::ActuatorConfig& act) {
  return {std::clamp(cmd[0], act.elevator_min, act.elevator_max),
          std::clamp(cmd[1], -act.aileron_limit, act.aileron_limit),
          std::clamp(cmd[2], -act.rudder_limit, act.rudder_limit)};
}

}  // namespace

AttitudeEnv::AttitudeEnv(ScenarioConfig cfg)
    : cfg_(std::move(cfg)),
      sim_(cfg_.sim),
      refs_([](double) { return AttitudeRefs{}; }),
      noise_rng_(cfg_.noise_seed) {
  cfg_.sim.validate();
}

void AttitudeEnv::set_reference(RefFn refs) { refs_ = std::move(refs); }

Eigen::Vector3d AttitudeEnv::clamp_cmd(const Eigen::Vector3d& cmd) const {
  return clamp_surfaces(cmd, cfg_.sim.actuators);
}

Eigen::Matrix<double, 9, 1> AttitudeEnv::make_obs() {
  const AttitudeRefs refs = refs_(sim_.time());
  const Eigen::Vector3d error(refs.beta - reading_.beta, refs.theta - reading_.theta,
                              refs.phi - reading_.phi);
  const Eigen::Vector3d weighted = attitude_error_weights().cwiseProduct(error);
  return attitude_observation(weighted, cmd_, reading_.p, reading_.q, reading_.r);
}

Eigen::Matrix<double, 9, 1> AttitudeEnv::reset() {
  sim_.reset(cfg_.altitude_m, cfg_.airspeed_mps);
  const sim::Surfaces& trim = sim_.actuator_positions();
  cmd_ = Eigen::Vector3d(trim.elevator, trim.aileron, trim.rudder);
  reading_ = fault::observe(sim_.state(), cfg_.noise, noise_rng_);
  return make_obs();
}

AttitudeEnv::Step AttitudeEnv::step(const Eigen::Vector3d& action) {
  cmd_ = clamp_cmd(cmd_ + attitude_increment(action, cfg_.sim.actuators));
  sim_.step({cmd_[0], cmd_[1], cmd_[2]});

  Step out;
  out.aborted = sim_.aborted();
  if (out.aborted && !state_finite(sim_.state())) {
    out.obs.setZero();
    out.reward = -1.0;
    return out;
  }
  reading_ = fault::observe(sim_.state(), cfg_.noise, noise_rng_);
  const AttitudeRefs refs = refs_(sim_.time());
  const Eigen::Vector3d error(refs.beta - reading_.beta, refs.theta - reading_.theta,
                              refs.phi - reading_.phi);
  out.reward = attitude_reward(error, cfg_.clip_mode);
  out.obs = attitude_observation(attitude_error_weights().cwiseProduct(error), cmd_,
                                 reading_.p, reading_.q, reading_.r);
  return out;
}

CascadeEnv::CascadeEnv(ScenarioConfig cfg, InnerPolicy inner)
    : cfg_(std::move(cfg)),
      sim_(cfg_.sim),
      inner_(std::move(inner)),
      h_ref_([](double) { return 0.0; }),
      phi_ref_([](double) { return 0.0; }),
      noise_rng_(cfg_.noise_seed) {
  cfg_.sim.validate();
}

void CascadeEnv::set_reference(SignalFn h_ref, SignalFn phi_ref) {
  h_ref_ = std::move(h_ref);
  phi_ref_ = std::move(phi_ref);
}

Eigen::Vector3d CascadeEnv::clamp_cmd(const Eigen::Vector3d& cmd) const {
  return clamp_surfaces(cmd, cfg_.sim.actuators);
}

Eigen::Vector2d CascadeEnv::make_obs() const {
  return altitude_observation(h_ref_(sim_.time()) - reading_.h, theta_ref_);
}

Eigen::Vector2d CascadeEnv::reset() {
  sim_.reset(cfg_.altitude_m, cfg_.airspeed_mps);
  const sim::Surfaces& trim = sim_.actuator_positions();
  cmd_ = Eigen::Vector3d(trim.elevator, trim.aileron, trim.rudder);
  theta_ref_ = sim_.state().theta;  // start the reference where the plant is
  reading_ = fault::observe(sim_.state(), cfg_.noise, noise_rng_);
  return make_obs();
}

CascadeEnv::Step CascadeEnv::step(double action) {
  // Outer loop first: move the pitch reference the inner loop will chase
  // this very tick.
  theta_ref_ = std::clamp(theta_ref_ + pitch_ref_increment(action, cfg_.sim.dt),
                          -kThetaRefLimit, kThetaRefLimit);

  const Eigen::Vector3d error(-reading_.beta, theta_ref_ - reading_.theta,
                              phi_ref_(sim_.time()) - reading_.phi);
  const Eigen::Matrix<double, 9, 1> obs_att = attitude_observation(
      attitude_error_weights().cwiseProduct(error), cmd_, reading_.p, reading_.q,
      reading_.r);
  cmd_ = clamp_cmd(cmd_ + attitude_increment(inner_(obs_att), cfg_.sim.actuators));
  sim_.step({cmd_[0], cmd_[1], cmd_[2]});

  Step out;
  out.aborted = sim_.aborted();
  if (out.aborted && !state_finite(sim_.state())) {
    out.obs.setZero();
    out.reward = -1.0;
    out.reward_att = -1.0;
    return out;
  }
  reading_ = fault::observe(sim_.state(), cfg_.noise, noise_rng_);
  const double t = sim_.time();
  const Eigen::Vector3d err_att(-reading_.beta, theta_ref_ - reading_.theta,
                                phi_ref_(t) - reading_.phi);
  out.reward_att = attitude_reward(err_att, cfg_.clip_mode);
  out.reward = altitude_reward(h_ref_(t) - reading_.h);
  out.obs = make_obs();
  return out;
}

}  // namespace flightrl::env
