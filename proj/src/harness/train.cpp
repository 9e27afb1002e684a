#include "flightrl/harness/train.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "flightrl/io/csv.hpp"

namespace flightrl::harness {
namespace {

bool diag_finite(const sac::StepDiagnostics& d) {
  return std::isfinite(d.critic_loss) && std::isfinite(d.policy_objective) &&
         std::isfinite(d.temperature_loss) && std::isfinite(d.eta);
}

std::string checkpoint_path(const StageConfig& run, const std::string& tag) {
  return run.out_dir + "/" + run.stage_name + "_" + tag + ".ckpt";
}

void heartbeat(const StageConfig& run, std::int64_t step, std::int64_t episode,
               double last_reward) {
  std::printf("[%s] step %lld/%lld  episode %lld  reward %.2f\n", run.stage_name.c_str(),
              static_cast<long long>(step), static_cast<long long>(run.total_steps),
              static_cast<long long>(episode), last_reward);
  std::fflush(stdout);
}

void write_curve(const StageConfig& run, const std::vector<EpisodeStat>& curve) {
  if (run.out_dir.empty()) return;
  io::CsvWriter csv(run.out_dir + "/curve_" + run.stage_name + ".csv",
                    {"episode", "end_step", "reward_sum", "aborted"});
  for (const EpisodeStat& e : curve)
    csv.row({static_cast<double>(e.episode), static_cast<double>(e.end_step),
             e.reward_sum, e.aborted ? 1.0 : 0.0});
}

// Shared episode-loop skeleton. `reset_episode` rebuilds references and
// returns the initial observation; `do_step` advances one tick and returns
// (reward, aborted) while filling the next observation.
template <typename Obs, typename ResetFn, typename StepFn>
StageResult run_stage(sac::SacAgent& agent, sac::ReplayBuffer& buffer,
                      const StageConfig& run, std::int64_t ticks, Rng& rng,
                      ResetFn reset_episode, StepFn do_step) {
  if (run.total_steps <= 0) throw UsageError("train: total_steps must be positive");
  if (run.updates_per_step < 1) throw UsageError("train: updates_per_step must be >= 1");
  if (ticks <= 0) throw UsageError("train: episode shorter than one tick");
  if (!run.out_dir.empty()) std::filesystem::create_directories(run.out_dir);

  StageResult out;
  std::int64_t step = 0, episode = 0;
  while (step < run.total_steps && !out.diverged) {
    Obs obs = reset_episode();
    EpisodeStat stat;
    stat.episode = episode;
    for (std::int64_t k = 0; k < ticks && step < run.total_steps; ++k) {
      Obs next;
      const auto [reward, aborted] = do_step(obs, next, rng);
      sac::StepDiagnostics diag;
      for (int u = 0; u < run.updates_per_step; ++u) {
        diag = sac::train_step(agent, buffer, rng);
        if (diag.updated && !diag_finite(diag)) break;
      }
      ++step;
      stat.reward_sum += reward;
      if (diag.updated && !diag_finite(diag)) {
        out.diverged = true;
        if (!run.out_dir.empty())
          save_agent_atomic(agent, checkpoint_path(run, "diverged"), rng);
        break;
      }
      if (run.heartbeat_every > 0 && step % run.heartbeat_every == 0)
        heartbeat(run, step, episode, stat.reward_sum);
      if (run.checkpoint_every > 0 && step % run.checkpoint_every == 0 &&
          !run.out_dir.empty())
        save_agent_atomic(agent, checkpoint_path(run, std::to_string(step)), rng);
      obs = next;
      if (aborted) {
        stat.aborted = true;
        break;
      }
    }
    stat.end_step = step;
    out.curve.push_back(stat);
    ++episode;
  }
  out.steps_done = step;
  if (!run.out_dir.empty() && !out.diverged) {
    out.final_checkpoint = checkpoint_path(run, "final");
    save_agent_atomic(agent, out.final_checkpoint, rng);
  }
  write_curve(run, out.curve);
  return out;
}

}  // namespace

std::vector<double> smoothed(const std::vector<double>& xs, int window) {
  if (window < 1) throw UsageError("smoothed: window must be >= 1");
  std::vector<double> out(xs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    acc += xs[i];
    if (i >= static_cast<std::size_t>(window)) acc -= xs[i - window];
    out[i] = acc / std::min<std::size_t>(i + 1, window);
  }
  return out;
}

void save_agent_atomic(const sac::SacAgent& agent, const std::string& path,
                       const Rng& env_rng) {
  const std::string tmp = path + ".tmp";
  sac::save_agent(agent, tmp, env_rng);
  std::filesystem::rename(tmp, path);
}

StageResult train_attitude(sac::SacAgent& agent, const env::ScenarioConfig& scenario,
                           const ReferenceProgram& program, const StageConfig& run,
                           Rng& rng) {
  if (agent.cfg.state_dim != 9 || agent.cfg.action_dim != 3)
    throw UsageError("train_attitude: agent must be 9-state, 3-action");
  sac::ReplayBuffer buffer(9, 3, agent.cfg.buffer_capacity);
  env::AttitudeEnv e(scenario);
  const auto ticks =
      static_cast<std::int64_t>(std::llround(run.episode_s / scenario.sim.dt));

  using Obs = Eigen::Matrix<double, 9, 1>;
  return run_stage<Obs>(
      agent, buffer, run, ticks, rng,
      [&]() {
        e.set_reference(attitude_steps(program, run.episode_s, rng));
        return e.reset();
      },
      [&](const Obs& obs, Obs& next, Rng& r) {
        const VectorXd a = sac::sample_action(agent, obs, r);
        const auto st = e.step(Eigen::Vector3d(a));
        buffer.push(obs, a, st.reward, st.obs);
        next = st.obs;
        return std::pair<double, bool>(st.reward, st.aborted);
      });
}

StageResult train_altitude(sac::SacAgent& agent, const sac::SacAgent& attitude,
                           const env::ScenarioConfig& scenario,
                           const ReferenceProgram& program, const StageConfig& run,
                           Rng& rng) {
  if (agent.cfg.state_dim != 2 || agent.cfg.action_dim != 1)
    throw UsageError("train_altitude: agent must be 2-state, 1-action");
  if (attitude.cfg.state_dim != 9 || attitude.cfg.action_dim != 3)
    throw UsageError("train_altitude: inner agent must be 9-state, 3-action");
  sac::ReplayBuffer buffer(2, 1, agent.cfg.buffer_capacity);
  env::CascadeEnv e(scenario, [&attitude](const Eigen::Matrix<double, 9, 1>& obs) {
    return Eigen::Vector3d(sac::mean_action(attitude, obs));
  });
  const auto ticks =
      static_cast<std::int64_t>(std::llround(run.episode_s / scenario.sim.dt));

  using Obs = Eigen::Vector2d;
  return run_stage<Obs>(
      agent, buffer, run, ticks, rng,
      [&]() {
        const CascadeSignals sig =
            altitude_training_signals(program, scenario.altitude_m, run.episode_s, rng);
        e.set_reference(sig.h_ref, sig.phi_ref);
        return e.reset();
      },
      [&](const Obs& obs, Obs& next, Rng& r) {
        const VectorXd a = sac::sample_action(agent, obs, r);
        const auto st = e.step(a[0]);
        buffer.push(obs, a, st.reward, st.obs);
        next = st.obs;
        return std::pair<double, bool>(st.reward, st.aborted);
      });
}

}  // namespace flightrl::harness
