#pragma once

#include <cstdint>
#include <string>

#include "flightrl/env/cascade_env.hpp"
#include "flightrl/harness/references.hpp"
#include "flightrl/sac/agent.hpp"

namespace flightrl::io {

// The config structs mirror the JSON file field-for-field in file units
// (angles in degrees), so snapshots round-trip bit-exactly; the make_*
// builders below are the single degree-to-radian conversion point.

struct ScenarioSettings {
  double altitude_m = 2000.0;
  double airspeed_mps = 90.0;
  std::string failure = "none";
  double failure_onset_s = 10.0;
  bool sensor_noise = false;
  std::uint64_t noise_seed = 0;
  bool gusts = false;
  std::string cost_clip = "absolute";
};

struct ProgramSettings {
  std::string kind = "altitude_profile";
  double h_period_s = 80.0, h_amplitude_m = 80.0;
  double phi_period_s = 50.0, phi_amplitude_deg = 50.0;
  double theta_step_min_deg = -15.0, theta_step_max_deg = 25.0;
  double phi_step_min_deg = -70.0, phi_step_max_deg = 70.0;
  double step_min_s = 2.5, step_max_s = 10.0;
  double profile_hold_s = 10.0, profile_leg_s = 30.0;
  double profile_rate_mps = 2.0, profile_bank_deg = 40.0;
  double bank1_on_s = 25.0, bank1_off_s = 45.0;
  double bank2_on_s = 55.0, bank2_off_s = 75.0;
  double leg_rate_min_mps = 1.0, leg_rate_max_mps = 3.0;
  double leg_min_s = 15.0, leg_max_s = 30.0;
};

struct TrainSettings {
  std::int64_t attitude_steps = 1'000'000;
  std::int64_t altitude_steps = 1'000'000;
  double attitude_episode_s = 20.0;
  double altitude_episode_s = 120.0;
  std::int64_t checkpoint_every = 100'000;
  std::int64_t heartbeat_every = 10'000;
};

// Everything a reproducible experiment needs. Agent dimensions are fixed by
// the tasks (attitude 9-state/3-action, altitude 2-state/1-action) and are
// not configurable.
struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::string out_dir = "runs/default";
  ScenarioSettings scenario;
  sac::AgentConfig attitude_agent;
  sac::AgentConfig altitude_agent;
  TrainSettings train;
  ProgramSettings program;

  void validate() const;  // throws ConfigError naming the offending key
};

ExperimentConfig default_config();

// File-unit settings -> domain objects (the one conversion point).
env::ScenarioConfig make_scenario(const ScenarioSettings& s);
harness::ReferenceProgram make_program(const ProgramSettings& p);

// Strict loader: unknown keys anywhere are errors, parse errors cite the
// location, an empty file means "all defaults". Both validate().
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json_text(const std::string& text);

// Full snapshot of every configurable value; load(snapshot(c)) == c.
std::string config_to_json_text(const ExperimentConfig& cfg);
void write_snapshot(const ExperimentConfig& cfg, const std::string& path);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);
inline bool operator!=(const ExperimentConfig& a, const ExperimentConfig& b) {
  return !(a == b);
}

// Evaluation scenario presets: "nominal" or a failure kind name; failures
// switch on at 10 s. Throws ConfigError on unknown names.
env::ScenarioConfig scenario_preset(const ExperimentConfig& cfg, const std::string& name);

}  // namespace flightrl::io
