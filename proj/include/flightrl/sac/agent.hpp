#pragma once

#include <cstdint>
#include <string>

#include "flightrl/nn/adam.hpp"
#include "flightrl/nn/checkpoint.hpp"
#include "flightrl/nn/network.hpp"
#include "flightrl/sac/replay_buffer.hpp"

namespace flightrl::sac {

// Soft actor-critic over a tanh-squashed Gaussian policy with twin critics,
// slowly tracking target critics, and automatic entropy-temperature tuning.
// All actions live in (-1, 1)^m; environments own the mapping to physical
// commands.

struct AgentConfig {
  int state_dim = 0;
  int action_dim = 0;
  int hidden_width = 64;   // two hidden layers of this width in every net
  double discount = 0.99;
  double smoothing = 0.995;  // target <- (1 - tau) * online + tau * target
  nn::LrSchedule lr;
  int batch_size = 256;
  std::int64_t buffer_capacity = 50000;
  double entropy_target = 0.0;  // default set to -action_dim in make()
  bool entropy_target_set = false;
  double log_sigma_min = -20.0;
  double log_sigma_max = 2.0;
  double eta_init = 1.0;

  void validate() const;
};

struct SacAgent {
  AgentConfig cfg;
  nn::NetworkParams policy;  // outputs [mu; log_sigma], 2m rows
  nn::NetworkParams q1, q2, q1_target, q2_target;
  nn::AdamState opt_policy, opt_q1, opt_q2;
  double log_eta = 0.0;
  nn::ScalarAdam opt_eta;
  std::int64_t train_steps = 0;

  double eta() const { return std::exp(log_eta); }
};

// Builds the three networks (policy 2m-wide head, critics on [s; a]) with
// Xavier init drawn from `rng`, targets cloned from the online critics.
SacAgent make_agent(const AgentConfig& cfg, Rng& rng);

// --- policy -----------------------------------------------------------------

// Batched squashed-Gaussian sample. When `xi` is null, noise is drawn from
// `rng` (column-major order); pass a zero matrix for the deterministic
// (mean) action. The tape is recorded only when `with_tape` is set.
struct PolicySample {
  MatrixXd action;       // m x B, strictly inside (-1, 1)
  RowVectorXd log_prob;  // 1 x B, squash-corrected
  MatrixXd mu, log_sigma, sigma, xi, u;  // intermediates (log_sigma clamped)
  MatrixXd log_sigma_raw;                // pre-clamp head, for gradient gating
  nn::GradientTape tape;
};

PolicySample sample_policy(const SacAgent& agent, const MatrixXd& states, Rng* rng,
                           const MatrixXd* xi = nullptr, bool with_tape = false);

// Single-state conveniences for environment interaction.
VectorXd sample_action(const SacAgent& agent, const VectorXd& state, Rng& rng);
VectorXd mean_action(const SacAgent& agent, const VectorXd& state);

// --- critics ----------------------------------------------------------------

enum class Critic { q1, q2, target1, target2 };

RowVectorXd q_values(const SacAgent& agent, Critic which, const MatrixXd& states,
                     const MatrixXd& actions);
double q_value(const SacAgent& agent, Critic which, const VectorXd& state,
               const VectorXd& action);

// --- losses (pure: evaluate and differentiate, never mutate the agent) ------

struct CriticUpdate {
  double loss = 0.0;  // mean squared TD error over both critics (2B terms)
  nn::Gradients grad_q1, grad_q2;
};

// Targets bootstrap from the target critics with a fresh squashed sample at
// s'; noise for that sample is drawn from `rng`.
CriticUpdate critic_loss(const SacAgent& agent, const Batch& batch, Rng& rng);

struct PolicyUpdate {
  double objective = 0.0;  // mean( min_k Q_k(s, a~) - eta * log pi(a~|s) )
  nn::Gradients grad;      // d(objective)/d(policy params): ascent direction
};

PolicyUpdate policy_objective(const SacAgent& agent, const Batch& batch, Rng& rng);

struct TemperatureUpdate {
  double loss = 0.0;          // mean( -eta * (log pi + target entropy) )
  double grad_log_eta = 0.0;  // d(loss)/d(log eta)
  double entropy_estimate = 0.0;  // mean(-log pi) under the current policy
};

TemperatureUpdate temperature_loss(const SacAgent& agent, const Batch& batch, Rng& rng);

// target <- (1 - tau) * online + tau * target, all critic blocks.
void soft_update_targets(SacAgent& agent);

// --- training step ----------------------------------------------------------

struct StepDiagnostics {
  bool updated = false;  // false while the buffer holds fewer than one batch
  double critic_loss = 0.0;
  double policy_objective = 0.0;
  double temperature_loss = 0.0;
  double eta = 0.0;
  double entropy_estimate = 0.0;
  double lr = 0.0;
};

// One gradient step in the fixed order: critics, policy, temperature, target
// smoothing. A single minibatch is drawn per call and shared by the three
// losses. RNG consumption order: batch indices, critic bootstrap noise,
// policy noise, temperature noise.
StepDiagnostics train_step(SacAgent& agent, const ReplayBuffer& buffer, Rng& rng);

// --- persistence ------------------------------------------------------------

void save_agent(const SacAgent& agent, const std::string& path, const Rng& env_rng);
SacAgent load_agent(const std::string& path, Rng* env_rng = nullptr);

}  // namespace flightrl::sac
