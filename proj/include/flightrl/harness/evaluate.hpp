#pragma once

#include <string>

#include "flightrl/env/cascade_env.hpp"
#include "flightrl/harness/references.hpp"
#include "flightrl/sac/agent.hpp"

namespace flightrl::harness {

inline constexpr double kSuccessThreshold = 0.05;
// Fixed normalization band for the zero-referenced sideslip channel
// (an acceptable excursion of +-5 deg).
inline constexpr double kBetaRange = deg2rad(10.0);

// Tracking report over one task. MAE is computed from true states against
// the reference; altitude and roll normalize by their reference's range over
// the task, sideslip by the fixed band. Aggregate is the mean of the three.
struct EvalReport {
  double mae_h = 0.0, mae_phi = 0.0, mae_beta = 0.0;       // m, rad, rad
  double range_h = 0.0, range_phi = 0.0, range_beta = 0.0;  // normalizers
  double nmae_h = 0.0, nmae_phi = 0.0, nmae_beta = 0.0;
  double aggregate = 0.0;
  bool aborted = false;
  bool success = false;  // aggregate < threshold and the episode completed
  double duration_s = 0.0;
  std::string log_path;  // empty when no trajectory log was requested
};

// Deterministic (mean-action) closed-loop run of a trained cascade over the
// program's reference pair; optionally logs the trajectory to CSV.
EvalReport evaluate_cascade(const sac::SacAgent& attitude, const sac::SacAgent& altitude,
                            const env::ScenarioConfig& scenario,
                            const ReferenceProgram& program,
                            const std::string& log_path = "");

// Step-task evaluation of the attitude stage alone: mean of per-episode
// per-channel nMAE over `episodes` random schedules drawn from `rng`.
// Pitch and roll normalize by each episode's reference range.
struct AttitudeEval {
  double nmae_beta = 0.0, nmae_theta = 0.0, nmae_phi = 0.0;
  double worst = 0.0;  // max of the three
  bool aborted = false;
};
AttitudeEval evaluate_attitude(const sac::SacAgent& agent,
                               const env::ScenarioConfig& scenario,
                               const ReferenceProgram& program, int episodes,
                               double episode_s, Rng& rng);

}  // namespace flightrl::harness
