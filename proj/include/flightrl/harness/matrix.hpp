#pragma once

#include <string>
#include <vector>

#include "flightrl/harness/evaluate.hpp"
#include "flightrl/harness/train.hpp"

namespace flightrl::harness {

// One robustness-matrix row: a flight condition plus a reference shape.
struct MatrixRow {
  std::string name;
  double altitude_m = 2000.0;
  double airspeed_mps = 90.0;
  ProgramKind kind = ProgramKind::altitude_profile;
  bool high_frequency = false;
  EvalReport report;
};

// The eight standard rows: four initial flight conditions flown on the
// nominal climb-hold-descend program (altitude reference re-anchored to each
// starting altitude), plus sinusoidal and triangular shapes at both
// frequencies on the nominal condition. Rows run concurrently (one worker
// per row) and are collected by index, so completion order never matters.
std::vector<MatrixRow> robustness_matrix(const sac::SacAgent& attitude,
                                         const sac::SacAgent& altitude,
                                         const env::ScenarioConfig& base,
                                         const ReferenceProgram& nominal,
                                         const std::string& out_csv = "");

// Wilson score interval for a binomial proportion.
struct WilsonInterval {
  double lo = 0.0, hi = 1.0;
};
WilsonInterval wilson(int successes, int n, double z = 1.96);

// Train-from-scratch reliability sweep: n independent cascaded pairs on
// fresh seeds, each evaluated once on the nominal task.
struct SweepSettings {
  int n = 5;
  std::uint64_t base_seed = 1;
  env::ScenarioConfig scenario;
  ReferenceProgram program;  // step ranges + training legs + nominal profile
  sac::AgentConfig attitude_agent;
  sac::AgentConfig altitude_agent;
  std::int64_t steps_per_stage = 200'000;
  double attitude_episode_s = 20.0;
  double altitude_episode_s = 120.0;
  double threshold = kSuccessThreshold;
  int workers = 0;  // 0: one per run, capped at hardware concurrency
  std::string out_dir;
};

struct SweepRun {
  std::uint64_t seed = 0;
  bool diverged = false;
  EvalReport report;
};

struct SweepResult {
  int n = 0;
  int successes = 0;
  double rate = 0.0;
  WilsonInterval ci;
  std::vector<SweepRun> runs;
};

SweepResult reliability_sweep(const SweepSettings& settings);

}  // namespace flightrl::harness
