#pragma once

#include <cstdint>
#include <vector>

#include "flightrl/env/toy_env.hpp"
#include "flightrl/sac/agent.hpp"

namespace flightrl::harness {

inline constexpr int kToyEpisodeSteps = 150;
inline constexpr int kToyEvalEpisodes = 10;
inline constexpr std::uint64_t kToyEvalSeed = 9000;  // fixed eval targets

// Episode score shifted into positive territory: sum of (1 + r) per step,
// so a perfect run scores near the episode length and higher is better.
// The raw return is all-negative, which makes "percent of oracle" ratios
// meaningless without the shift.
double toy_episode_score(const std::vector<double>& rewards);

// Mean deterministic (mean-action) score over the fixed evaluation targets.
double toy_eval_score(const sac::SacAgent& agent);

// Saturated-PD yardstick, grid-searched over gains on the same fixed
// evaluation targets.
struct ToyOracle {
  double kp = 0.0, kd = 0.0;
  double score = 0.0;
};
ToyOracle toy_oracle();

struct ToyResult {
  ToyOracle oracle;
  double first_score = 0.0;          // deterministic eval before any training
  double final_score = 0.0;          // after the last training step
  std::vector<double> eval_curve;    // one deterministic eval per round
  bool pass = false;                 // final_score >= 0.9 * oracle.score
};

// Train a fresh agent on the double integrator and score it against the
// oracle. Deterministic per seed.
ToyResult toy_benchmark(std::uint64_t seed, std::int64_t steps = 50'000);

}  // namespace flightrl::harness
