#include "flightrl/harness/toy.hpp"

#include <cmath>

namespace flightrl::harness {
namespace {

// Run the fixed evaluation episodes under `policy` and return the mean score.
template <typename Policy>
double run_eval(Policy policy) {
  env::ToyEnv e(kToyEvalSeed);
  double total = 0.0;
  for (int ep = 0; ep < kToyEvalEpisodes; ++ep) {
    Eigen::Vector2d obs = e.reset();
    double score = 0.0;
    for (int k = 0; k < kToyEpisodeSteps; ++k) {
      const auto st = e.step(policy(obs));
      score += 1.0 + st.reward;
      obs = st.obs;
    }
    total += score;
  }
  return total / kToyEvalEpisodes;
}

}  // namespace

double toy_episode_score(const std::vector<double>& rewards) {
  double s = 0.0;
  for (double r : rewards) s += 1.0 + r;
  return s;
}

double toy_eval_score(const sac::SacAgent& agent) {
  return run_eval(
      [&agent](const Eigen::Vector2d& obs) { return sac::mean_action(agent, obs)[0]; });
}

ToyOracle toy_oracle() {
  ToyOracle best;
  for (int ip = 1; ip <= 15; ++ip) {
    for (int id = 1; id <= 20; ++id) {
      const double kp = 0.2 * ip, kd = 0.2 * id;
      const double score = run_eval([kp, kd](const Eigen::Vector2d& obs) {
        return env::pd_action(obs, kp, kd);
      });
      if (score > best.score) best = {kp, kd, score};
    }
  }
  return best;
}

ToyResult toy_benchmark(std::uint64_t seed, std::int64_t steps) {
  if (steps < 1) throw UsageError("toy_benchmark: steps must be >= 1");

  sac::AgentConfig cfg;
  cfg.state_dim = 2;
  cfg.action_dim = 1;
  cfg.hidden_width = 32;
  cfg.lr = {3e-4, 3e-4, 0};

  Rng rng(seed);
  sac::SacAgent agent = sac::make_agent(cfg, rng);
  sac::ReplayBuffer buffer(2, 1, cfg.buffer_capacity);
  env::ToyEnv e(seed);

  ToyResult out;
  out.oracle = toy_oracle();
  out.first_score = toy_eval_score(agent);
  out.eval_curve.push_back(out.first_score);

  const std::int64_t eval_every = std::max<std::int64_t>(1, steps / 20);
  Eigen::Vector2d obs = e.reset();
  int ep_step = 0;
  for (std::int64_t step = 1; step <= steps; ++step) {
    const VectorXd a = sac::sample_action(agent, obs, rng);
    const auto st = e.step(a[0]);
    buffer.push(obs, a, st.reward, st.obs);
    sac::train_step(agent, buffer, rng);
    obs = st.obs;
    if (++ep_step == kToyEpisodeSteps) {
      obs = e.reset();
      ep_step = 0;
    }
    if (step % eval_every == 0) out.eval_curve.push_back(toy_eval_score(agent));
  }
  out.final_score = out.eval_curve.back();
  out.pass = out.final_score >= 0.9 * out.oracle.score;
  return out;
}

}  // namespace flightrl::harness
