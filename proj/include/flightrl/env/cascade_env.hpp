#pragma once

#include <cstdint>
#include <functional>

#include "flightrl/env/tracking.hpp"
#include "flightrl/rng.hpp"
#include "flightrl/sim/faults.hpp"
#include "flightrl/sim/simulator.hpp"

namespace flightrl::env {

// One scenario = plant + scheduled failure/gusts + sensor-noise model + the
// initial flight condition. Both environments read their sensors through the
// same noise pipeline and integrate agent actions into absolute commands
// clamped at the nominal (pre-failure) actuator limits: agents are never
// told what broke.
struct ScenarioConfig {
  sim::SimConfig sim;
  fault::NoiseSpec noise;
  std::uint64_t noise_seed = 0;
  CostClipMode clip_mode = CostClipMode::absolute;
  double altitude_m = 2000.0;
  double airspeed_mps = 90.0;
};

struct AttitudeRefs {
  double beta = 0.0, theta = 0.0, phi = 0.0;  // rad
};

// Inner-loop environment: the agent rate-commands the three surfaces to
// track [beta_ref, theta_ref, phi_ref]. Rewards and observations use the
// (possibly noisy) sensor reading taken after each step against the
// reference evaluated at the new time.
class AttitudeEnv {
 public:
  using RefFn = std::function<AttitudeRefs(double t)>;

  explicit AttitudeEnv(ScenarioConfig cfg);

  void set_reference(RefFn refs);
  Eigen::Matrix<double, 9, 1> reset();

  struct Step {
    Eigen::Matrix<double, 9, 1> obs;
    double reward = 0.0;
    bool aborted = false;
  };
  Step step(const Eigen::Vector3d& action);

  double time() const { return sim_.time(); }
  const sim::Simulator& simulator() const { return sim_; }
  const Eigen::Vector3d& surface_cmd() const { return cmd_; }
  const fault::SensorReading& last_reading() const { return reading_; }
  AttitudeRefs current_refs() const { return refs_(sim_.time()); }

 private:
  Eigen::Matrix<double, 9, 1> make_obs();
  Eigen::Vector3d clamp_cmd(const Eigen::Vector3d& cmd) const;

  ScenarioConfig cfg_;
  sim::Simulator sim_;
  RefFn refs_;
  Rng noise_rng_;
  Eigen::Vector3d cmd_ = Eigen::Vector3d::Zero();  // integrated [de, da, dr]
  fault::SensorReading reading_;
};

// Cascaded environment: an outer altitude agent rate-commands the pitch
// reference handed to a frozen inner attitude policy; both loops run at the
// plant rate and share one sensor reading per tick. Within a tick the pitch
// reference moves first, the inner policy acts on it, then the plant steps.
class CascadeEnv {
 public:
  using InnerPolicy = std::function<Eigen::Vector3d(const Eigen::Matrix<double, 9, 1>&)>;
  using SignalFn = std::function<double(double t)>;

  CascadeEnv(ScenarioConfig cfg, InnerPolicy inner);

  void set_reference(SignalFn h_ref, SignalFn phi_ref);
  Eigen::Vector2d reset();

  struct Step {
    Eigen::Vector2d obs;
    double reward = 0.0;      // altitude tracking
    double reward_att = 0.0;  // inner-loop reward, for the logs
    bool aborted = false;
  };
  Step step(double action);

  double time() const { return sim_.time(); }
  double theta_ref() const { return theta_ref_; }
  const sim::Simulator& simulator() const { return sim_; }
  const Eigen::Vector3d& surface_cmd() const { return cmd_; }
  const fault::SensorReading& last_reading() const { return reading_; }
  double h_ref_now() const { return h_ref_(sim_.time()); }
  double phi_ref_now() const { return phi_ref_(sim_.time()); }

  // The pitch reference is rate-limited by the action map and softly held
  // inside +-30 deg.
  static constexpr double kThetaRefLimit = deg2rad(30.0);

 private:
  Eigen::Vector2d make_obs() const;
  Eigen::Vector3d clamp_cmd(const Eigen::Vector3d& cmd) const;

  ScenarioConfig cfg_;
  sim::Simulator sim_;
  InnerPolicy inner_;
  SignalFn h_ref_, phi_ref_;
  Rng noise_rng_;
  Eigen::Vector3d cmd_ = Eigen::Vector3d::Zero();
  fault::SensorReading reading_;
  double theta_ref_ = 0.0;
};

}  // namespace flightrl::env
