#pragma once

#include <string>

#include "flightrl/env/cascade_env.hpp"
#include "flightrl/rng.hpp"
#include "flightrl/types.hpp"

namespace flightrl::harness {

enum class ProgramKind { attitude_steps, altitude_profile, sinusoidal, triangular };

ProgramKind program_kind_from_name(const std::string& name);
std::string program_kind_name(ProgramKind kind);

// Every reference shape the tasks use, in one bag of parameters; only the
// fields relevant to `kind` are read. Angles are radians internally.
struct ReferenceProgram {
  ProgramKind kind = ProgramKind::altitude_profile;

  // sinusoidal / triangular waves
  double h_period_s = 80.0;
  double h_amplitude_m = 80.0;
  double phi_period_s = 50.0;
  double phi_amplitude_rad = deg2rad(50.0);

  // randomized attitude steps (training and step-task evaluation)
  double theta_min_rad = deg2rad(-15.0);
  double theta_max_rad = deg2rad(25.0);
  double phi_min_rad = deg2rad(-70.0);
  double phi_max_rad = deg2rad(70.0);
  double step_min_s = 2.5;
  double step_max_s = 10.0;

  // climb-hold-descend profile with two opposite banked turns
  double profile_hold_s = 10.0;   // level holds before/between/after the legs
  double profile_leg_s = 30.0;    // climb and descend leg duration
  double profile_rate_mps = 2.0;  // climb rate
  double profile_bank_rad = deg2rad(40.0);
  double bank1_on_s = 25.0, bank1_off_s = 45.0;  // right turn window
  double bank2_on_s = 55.0, bank2_off_s = 75.0;  // left turn window

  // randomized altitude training legs
  double leg_rate_min_mps = 1.0, leg_rate_max_mps = 3.0;
  double leg_min_s = 15.0, leg_max_s = 30.0;

  void validate() const;  // throws ConfigError naming the offending field

  double profile_duration_s() const { return 3 * profile_hold_s + 2 * profile_leg_s; }
};

// Table-style wave presets: low frequency is 80 s / 80 m and 50 s / 50 deg,
// high frequency halves the periods and amplitudes.
ReferenceProgram sinusoidal_program(bool high_frequency);
ReferenceProgram triangular_program(bool high_frequency);

// Unit triangle wave over phase in [0, 1): starts at 0 rising, peaks +1 at
// 1/4, crosses 0 at 1/2, bottoms -1 at 3/4.
double triangle_wave(double phase01);

// Piecewise-constant random attitude steps covering [0, horizon]. The whole
// schedule is drawn up front (theta levels/durations first, then phi), so
// equal rng states give identical schedules. Sideslip reference is 0.
env::AttitudeEnv::RefFn attitude_steps(const ReferenceProgram& p, double horizon_s,
                                       Rng& rng);

// Deterministic altitude/roll reference pair anchored at h0.
struct CascadeSignals {
  env::CascadeEnv::SignalFn h_ref;
  env::CascadeEnv::SignalFn phi_ref;
  double duration_s = 0.0;
};
CascadeSignals cascade_signals(const ReferenceProgram& p, double h0);

// Randomized climb/hold/descend altitude legs plus roll steps, for the
// altitude training stage. Drawn up front like attitude_steps (altitude
// legs first, then roll steps).
CascadeSignals altitude_training_signals(const ReferenceProgram& p, double h0,
                                         double horizon_s, Rng& rng);

}  // namespace flightrl::harness
