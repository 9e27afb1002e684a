#pragma once

#include <string>
#include <utility>

#include "flightrl/rng.hpp"
#include "flightrl/sim/aircraft.hpp"

namespace flightrl::fault {

// Failure injection is a pure transform applied between the actuator outputs
// and the plant: given the scheduled failure and the current time it rewrites
// the effective surface deflections and/or the aerodynamic model. Before the
// onset time every case is the identity, so pre-fault trajectories are
// bit-identical to the nominal ones. Agents are never told about the change.

enum class FailureKind {
  none,
  rudder_jam,      // rudder stuck at a fixed deflection
  aileron_loss,    // aileron effectiveness scaled down
  elevator_range,  // elevator travel clipped to a narrow band
  stabilizer_loss, // horizontal-tail damage: elevator authority and pitch damping
  icing,           // lift ceiling drops, parasite drag rises
  cg_shift,        // center of gravity jumps aft
};

struct FailureSpec {
  FailureKind kind = FailureKind::none;
  double onset_s = 0.0;

  double jam_angle = deg2rad(-15.0);        // rudder_jam
  double aileron_scale = 0.3;               // aileron_loss
  double elevator_limit = deg2rad(2.5);     // elevator_range: travel in [-lim, lim]
  double stabilizer_scale = 0.3;            // stabilizer_loss on CL_de, Cm_de, Cm_q
  double icing_cl_scale = 0.7;              // icing: CL_max multiplier
  double icing_cd0_add = 0.06;              // icing: CD0 increment
  double cg_shift_aft_m = 0.25;             // cg_shift: aft-positive, m
};

FailureKind failure_kind_from_name(const std::string& name);  // throws ConfigError
std::string failure_kind_name(FailureKind kind);

// Identity before onset; afterwards rewrites surfaces and/or coefficients.
std::pair<sim::Surfaces, sim::AeroModel> apply_failure(const FailureSpec& spec,
                                                       double t,
                                                       const sim::Surfaces& commanded,
                                                       const sim::AeroModel& model);

// Biased Gaussian sensor noise on the signals the controllers consume.
// Disabled specs are the identity and draw nothing from the rng.
struct NoiseSpec {
  bool enabled = false;
  // standard deviations / constant biases per signal group
  double rate_sd = 6.3e-4, rate_bias = 3.0e-5;   // p, q, r (rad/s)
  double att_sd = 3.2e-5, att_bias = 4.0e-3;     // theta, phi (rad)
  double beta_sd = 2.7e-4, beta_bias = 1.8e-3;   // sideslip (rad)
  double alt_sd = 6.7e-2, alt_bias = 8.0e-3;     // altitude (m)
};

struct SensorReading {
  double p = 0, q = 0, r = 0;
  double theta = 0, phi = 0;
  double beta = 0;
  double h = 0;
};

// Draw order (when enabled): p, q, r, theta, phi, beta, h.
SensorReading observe(const sim::AircraftState& x, const NoiseSpec& spec, Rng& rng);

// Discrete vertical-gust windows: inside a window the gust tilts the incoming
// flow, entering the buildup as an angle-of-attack offset atan(w_gust / V).
struct GustSpec {
  bool enabled = false;
  double updraft_mps = 4.572;  // 15 ft/s
  double first_onset_s = 20.0, second_onset_s = 75.0;
  double duration_s = 3.0;
};

double gust_alpha(const GustSpec& spec, double t, double airspeed);

}  // namespace flightrl::fault
