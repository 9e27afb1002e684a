#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flightrl/env/cascade_env.hpp"
#include "flightrl/harness/references.hpp"
#include "flightrl/sac/agent.hpp"

namespace flightrl::harness {

// One training stage: episode-chunked closed-loop rollout with one gradient
// step per environment step once the buffer holds a batch.
struct StageConfig {
  std::int64_t total_steps = 1'000'000;
  double episode_s = 20.0;
  int updates_per_step = 1;           // gradient steps per environment step
  std::int64_t checkpoint_every = 0;  // steps between periodic checkpoints; 0 = none
  std::int64_t heartbeat_every = 0;   // steps between progress lines; 0 = silent
  std::string out_dir;                // "": nothing written to disk
  std::string stage_name = "attitude";
};

struct EpisodeStat {
  std::int64_t episode = 0;
  std::int64_t end_step = 0;
  double reward_sum = 0.0;
  bool aborted = false;
};

struct StageResult {
  std::vector<EpisodeStat> curve;  // one entry per episode, in order
  bool diverged = false;           // non-finite loss seen; run stopped
  std::int64_t steps_done = 0;
  std::string final_checkpoint;  // written when out_dir is set
};

// Trailing-window moving average (window clipped at the front), for
// smoothed learning curves.
std::vector<double> smoothed(const std::vector<double>& xs, int window);

// Inner attitude stage: fresh random step references each episode.
StageResult train_attitude(sac::SacAgent& agent, const env::ScenarioConfig& scenario,
                           const ReferenceProgram& program, const StageConfig& run,
                           Rng& rng);

// Outer altitude stage on top of a frozen attitude policy (deterministic
// mean actions, parameters never touched).
StageResult train_altitude(sac::SacAgent& agent, const sac::SacAgent& attitude,
                           const env::ScenarioConfig& scenario,
                           const ReferenceProgram& program, const StageConfig& run,
                           Rng& rng);

// Write path + ".tmp" then rename, so an interrupted run never leaves a
// truncated checkpoint behind.
void save_agent_atomic(const sac::SacAgent& agent, const std::string& path,
                       const Rng& env_rng);

}  // namespace flightrl::harness
