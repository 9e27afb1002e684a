#include "flightrl/sac/agent.hpp"

#include <cmath>
#include <sstream>

namespace flightrl::sac {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // log(2*pi)
constexpr double kLog2 = 0.6931471805599453;
// tanh saturates to exactly +-1.0 in double arithmetic around |u| ~ 19; the
// guard keeps sampled actions strictly inside the open interval.
constexpr double kSquashGuard = 1e-12;

std::vector<nn::LayerSpec> mlp(int in, int hidden, int out) {
  return {{in, hidden, nn::LayerKind::hidden},
          {hidden, hidden, nn::LayerKind::hidden},
          {hidden, out, nn::LayerKind::linear}};
}

MatrixXd stack_state_action(const MatrixXd& s, const MatrixXd& a) {
  MatrixXd in(s.rows() + a.rows(), s.cols());
  in << s, a;
  return in;
}

const nn::NetworkParams& critic_net(const SacAgent& agent, Critic which) {
  switch (which) {
    case Critic::q1: return agent.q1;
    case Critic::q2: return agent.q2;
    case Critic::target1: return agent.q1_target;
    case Critic::target2: return agent.q2_target;
  }
  throw UsageError("critic_net: bad selector");
}

}  // namespace

void AgentConfig::validate() const {
  if (state_dim <= 0 || action_dim <= 0)
    throw ConfigError("agent: state_dim and action_dim must be positive");
  if (hidden_width <= 0) throw ConfigError("agent: hidden_width must be positive");
  if (!(discount > 0.0 && discount < 1.0))
    throw ConfigError("agent: discount must lie in (0, 1)");
  if (!(smoothing >= 0.0 && smoothing < 1.0))
    throw ConfigError("agent: smoothing must lie in [0, 1)");
  if (batch_size <= 0) throw ConfigError("agent: batch_size must be positive");
  if (buffer_capacity <= 0) throw ConfigError("agent: buffer_capacity must be positive");
  if (!(log_sigma_min < log_sigma_max))
    throw ConfigError("agent: log_sigma_min must be below log_sigma_max");
  if (!(eta_init > 0.0)) throw ConfigError("agent: eta_init must be positive");
  if (!(lr.initial >= 0.0 && lr.final_value >= 0.0))
    throw ConfigError("agent: learning rates must be non-negative");
}

SacAgent make_agent(const AgentConfig& cfg_in, Rng& rng) {
  AgentConfig cfg = cfg_in;
  if (!cfg.entropy_target_set) {
    cfg.entropy_target = -static_cast<double>(cfg.action_dim);
    cfg.entropy_target_set = true;
  }
  cfg.validate();

  SacAgent a;
  a.cfg = cfg;
  const int n = cfg.state_dim, m = cfg.action_dim, l = cfg.hidden_width;
  // Init order (part of the seed contract): policy, q1, q2.
  a.policy = nn::xavier_init(mlp(n, l, 2 * m), rng);
  a.q1 = nn::xavier_init(mlp(n + m, l, 1), rng);
  a.q2 = nn::xavier_init(mlp(n + m, l, 1), rng);
  a.q1_target = a.q1;
  a.q2_target = a.q2;
  a.opt_policy = nn::AdamState::for_network(a.policy);
  a.opt_q1 = nn::AdamState::for_network(a.q1);
  a.opt_q2 = nn::AdamState::for_network(a.q2);
  a.log_eta = std::log(cfg.eta_init);
  return a;
}

PolicySample sample_policy(const SacAgent& agent, const MatrixXd& states, Rng* rng,
                           const MatrixXd* xi, bool with_tape) {
  const int m = agent.cfg.action_dim;
  const auto B = states.cols();

  PolicySample ps;
  MatrixXd out = nn::forward(agent.policy, states, with_tape ? &ps.tape : nullptr);
  ps.mu = out.topRows(m);
  MatrixXd raw = out.bottomRows(m);
  ps.log_sigma =
      raw.cwiseMax(agent.cfg.log_sigma_min).cwiseMin(agent.cfg.log_sigma_max);
  ps.sigma = ps.log_sigma.array().exp().matrix();

  if (xi) {
    if (xi->rows() != m || xi->cols() != B)
      throw UsageError("sample_policy: xi shape mismatch");
    ps.xi = *xi;
  } else {
    if (!rng) throw UsageError("sample_policy: need an rng or explicit noise");
    ps.xi = rng->gaussian_matrix(m, static_cast<int>(B));
  }

  ps.u = ps.mu + ps.sigma.cwiseProduct(ps.xi);
  ps.action = ps.u.array().tanh().max(-1.0 + kSquashGuard).min(1.0 - kSquashGuard);

  // log pi under the squashed Gaussian; the tanh correction uses the
  // numerically stable identity
  //   log(1 - tanh(u)^2) = 2 * (log 2 - u - softplus(-2u)).
  Eigen::ArrayXXd neg2u = -2.0 * ps.u.array();
  Eigen::ArrayXXd softplus = neg2u.max(0.0) + (-neg2u.abs()).exp().log1p();
  Eigen::ArrayXXd per = -0.5 * kLog2Pi - ps.log_sigma.array() -
                        0.5 * ps.xi.array().square() -
                        2.0 * (kLog2 - ps.u.array() - softplus);
  ps.log_prob = per.colwise().sum().matrix();

  // Stash the pre-clamp head so the policy gradient can gate the clamp.
  ps.log_sigma_raw = std::move(raw);
  return ps;
}

VectorXd sample_action(const SacAgent& agent, const VectorXd& state, Rng& rng) {
  return sample_policy(agent, MatrixXd(state), &rng).action.col(0);
}

VectorXd mean_action(const SacAgent& agent, const VectorXd& state) {
  const MatrixXd zero = MatrixXd::Zero(agent.cfg.action_dim, 1);
  return sample_policy(agent, MatrixXd(state), nullptr, &zero).action.col(0);
}

RowVectorXd q_values(const SacAgent& agent, Critic which, const MatrixXd& states,
                     const MatrixXd& actions) {
  if (states.cols() != actions.cols())
    throw UsageError("q_values: state/action batch mismatch");
  return nn::forward(critic_net(agent, which), stack_state_action(states, actions))
      .row(0);
}

double q_value(const SacAgent& agent, Critic which, const VectorXd& state,
               const VectorXd& action) {
  return q_values(agent, which, MatrixXd(state), MatrixXd(action))[0];
}

CriticUpdate critic_loss(const SacAgent& agent, const Batch& batch, Rng& rng) {
  const auto B = batch.size();
  const double gamma = agent.cfg.discount;
  const double eta = agent.eta();

  // Bootstrap target: fresh squashed sample at s', scored by the slow critics.
  PolicySample next = sample_policy(agent, batch.s_next, &rng);
  const MatrixXd in_next = stack_state_action(batch.s_next, next.action);
  RowVectorXd qt1 = nn::forward(agent.q1_target, in_next).row(0);
  RowVectorXd qt2 = nn::forward(agent.q2_target, in_next).row(0);
  RowVectorXd y =
      batch.r + gamma * (qt1.cwiseMin(qt2) - eta * next.log_prob).eval();

  const MatrixXd in = stack_state_action(batch.s, batch.a);
  nn::GradientTape t1, t2;
  RowVectorXd q1v = nn::forward(agent.q1, in, &t1).row(0);
  RowVectorXd q2v = nn::forward(agent.q2, in, &t2).row(0);

  const RowVectorXd d1 = q1v - y;
  const RowVectorXd d2 = q2v - y;

  CriticUpdate cu;
  cu.loss = (d1.squaredNorm() + d2.squaredNorm()) / (2.0 * B);
  cu.grad_q1 = nn::backward(agent.q1, t1, MatrixXd(d1 / B));
  cu.grad_q2 = nn::backward(agent.q2, t2, MatrixXd(d2 / B));
  return cu;
}

PolicyUpdate policy_objective(const SacAgent& agent, const Batch& batch, Rng& rng) {
  const auto B = batch.size();
  const int m = agent.cfg.action_dim;
  const double eta = agent.eta();

  PolicySample ps = sample_policy(agent, batch.s, &rng, nullptr, /*with_tape=*/true);
  const MatrixXd in = stack_state_action(batch.s, ps.action);
  nn::GradientTape t1, t2;
  RowVectorXd q1v = nn::forward(agent.q1, in, &t1).row(0);
  RowVectorXd q2v = nn::forward(agent.q2, in, &t2).row(0);
  RowVectorXd qmin = q1v.cwiseMin(q2v);

  PolicyUpdate pu;
  pu.objective = (qmin - eta * ps.log_prob).mean();

  // d(min_k Qk)/d(action): route a unit output gradient through whichever
  // critic attains the minimum, column by column, and read the action rows
  // of the resulting input gradient.
  MatrixXd sel1 = (q1v.array() <= q2v.array()).cast<double>().matrix();
  MatrixXd sel2 = MatrixXd::Ones(1, B) - sel1;
  const nn::BackwardOptions input_only{.param_grads = false};
  MatrixXd qa = nn::backward(agent.q1, t1, sel1, input_only).input.bottomRows(m) +
                nn::backward(agent.q2, t2, sel2, input_only).input.bottomRows(m);

  // Reparameterized gradient of J = mean(qmin - eta * log pi) through
  // a = tanh(mu + sigma * xi) with xi held fixed:
  //   dJ/dmu        = qa (1 - a^2) - 2 eta a
  //   dJ/dlog_sigma = qa (1 - a^2) sigma xi - eta (2 a sigma xi - 1)
  // where the log-sigma rows are gated to zero when the head is clamped.
  Eigen::ArrayXXd a = ps.u.array().tanh();
  Eigen::ArrayXXd dsq = 1.0 - a.square();
  Eigen::ArrayXXd sx = ps.sigma.array() * ps.xi.array();
  Eigen::ArrayXXd dmu = qa.array() * dsq - 2.0 * eta * a;
  Eigen::ArrayXXd dls = qa.array() * dsq * sx - eta * (2.0 * a * sx - 1.0);
  Eigen::ArrayXXd gate = ((ps.log_sigma_raw.array() > agent.cfg.log_sigma_min) &&
                          (ps.log_sigma_raw.array() < agent.cfg.log_sigma_max))
                             .cast<double>();
  dls *= gate;

  MatrixXd dout(2 * m, B);
  dout << (dmu / B).matrix(), (dls / B).matrix();
  pu.grad = nn::backward(agent.policy, ps.tape, dout);
  return pu;
}

TemperatureUpdate temperature_loss(const SacAgent& agent, const Batch& batch, Rng& rng) {
  PolicySample ps = sample_policy(agent, batch.s, &rng);
  const double mean_excess =
      (ps.log_prob.array() + agent.cfg.entropy_target).mean();
  TemperatureUpdate tu;
  tu.loss = -agent.eta() * mean_excess;
  // d/d(log eta) of -exp(log eta) * mean_excess
  tu.grad_log_eta = -agent.eta() * mean_excess;
  tu.entropy_estimate = -ps.log_prob.mean();
  return tu;
}

void soft_update_targets(SacAgent& agent) {
  const double tau = agent.cfg.smoothing;
  auto blend = [tau](nn::NetworkParams& tgt, const nn::NetworkParams& src) {
    for (std::size_t i = 0; i < tgt.layers.size(); ++i) {
      auto tv = nn::block_views(tgt.layers[i]);
      auto sv = nn::block_views(src.layers[i]);
      for (int k = 0; k < 4; ++k)
        if (tv[k].size() > 0) tv[k] = (1.0 - tau) * sv[k] + tau * tv[k];
    }
  };
  blend(agent.q1_target, agent.q1);
  blend(agent.q2_target, agent.q2);
}

StepDiagnostics train_step(SacAgent& agent, const ReplayBuffer& buffer, Rng& rng) {
  StepDiagnostics d;
  if (buffer.size() < agent.cfg.batch_size) return d;

  const double lr = agent.cfg.lr.at(agent.train_steps);
  const Batch batch = buffer.sample(agent.cfg.batch_size, rng);

  const CriticUpdate cu = critic_loss(agent, batch, rng);
  nn::adam_step(agent.q1, cu.grad_q1, agent.opt_q1, lr);
  nn::adam_step(agent.q2, cu.grad_q2, agent.opt_q2, lr);

  PolicyUpdate pu = policy_objective(agent, batch, rng);
  // Ascend the objective: minimize its negation.
  for (auto& l : pu.grad.layers)
    for (auto& view : nn::block_views(l)) view = -view;
  nn::adam_step(agent.policy, pu.grad, agent.opt_policy, lr);

  const TemperatureUpdate tu = temperature_loss(agent, batch, rng);
  agent.log_eta = nn::adam_step(agent.log_eta, tu.grad_log_eta, agent.opt_eta, lr);

  soft_update_targets(agent);
  agent.train_steps += 1;

  d.updated = true;
  d.critic_loss = cu.loss;
  d.policy_objective = pu.objective;
  d.temperature_loss = tu.loss;
  d.eta = agent.eta();
  d.entropy_estimate = tu.entropy_estimate;
  d.lr = lr;
  return d;
}

namespace {

std::string config_text(const AgentConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "state_dim " << c.state_dim << "\naction_dim " << c.action_dim
     << "\nhidden_width " << c.hidden_width << "\ndiscount " << c.discount
     << "\nsmoothing " << c.smoothing << "\nlr_initial " << c.lr.initial
     << "\nlr_final " << c.lr.final_value << "\nlr_decay_steps " << c.lr.decay_steps
     << "\nbatch_size " << c.batch_size << "\nbuffer_capacity " << c.buffer_capacity
     << "\nentropy_target " << c.entropy_target << "\nlog_sigma_min "
     << c.log_sigma_min << "\nlog_sigma_max " << c.log_sigma_max << "\neta_init "
     << c.eta_init << "\n";
  return os.str();
}

AgentConfig parse_config_text(const std::string& text) {
  AgentConfig c;
  c.entropy_target_set = true;
  std::istringstream is(text);
  std::string key;
  while (is >> key) {
    if (key == "state_dim") is >> c.state_dim;
    else if (key == "action_dim") is >> c.action_dim;
    else if (key == "hidden_width") is >> c.hidden_width;
    else if (key == "discount") is >> c.discount;
    else if (key == "smoothing") is >> c.smoothing;
    else if (key == "lr_initial") is >> c.lr.initial;
    else if (key == "lr_final") is >> c.lr.final_value;
    else if (key == "lr_decay_steps") is >> c.lr.decay_steps;
    else if (key == "batch_size") is >> c.batch_size;
    else if (key == "buffer_capacity") is >> c.buffer_capacity;
    else if (key == "entropy_target") is >> c.entropy_target;
    else if (key == "log_sigma_min") is >> c.log_sigma_min;
    else if (key == "log_sigma_max") is >> c.log_sigma_max;
    else if (key == "eta_init") is >> c.eta_init;
    else throw CheckpointError("agent checkpoint: unknown config key '" + key + "'");
    if (!is) throw CheckpointError("agent checkpoint: malformed config value");
  }
  return c;
}

}  // namespace

void save_agent(const SacAgent& agent, const std::string& path, const Rng& env_rng) {
  nn::Checkpoint c;
  c.put_text("agent_config", config_text(agent.cfg));
  c.put_network("policy", agent.policy);
  c.put_network("q1", agent.q1);
  c.put_network("q2", agent.q2);
  c.put_network("q1_target", agent.q1_target);
  c.put_network("q2_target", agent.q2_target);
  c.put_adam("opt_policy", agent.opt_policy);
  c.put_adam("opt_q1", agent.opt_q1);
  c.put_adam("opt_q2", agent.opt_q2);
  c.put_scalar("log_eta", agent.log_eta);
  c.put_scalar_adam("opt_eta", agent.opt_eta);
  c.put_counter("train_steps", agent.train_steps);
  c.put_text("env_rng", env_rng.serialize());
  c.save(path);
}

SacAgent load_agent(const std::string& path, Rng* env_rng) {
  const auto c = nn::Checkpoint::load(path);
  SacAgent a;
  a.cfg = parse_config_text(c.get_text("agent_config"));
  a.cfg.validate();
  a.policy = c.get_network("policy");
  a.q1 = c.get_network("q1");
  a.q2 = c.get_network("q2");
  a.q1_target = c.get_network("q1_target");
  a.q2_target = c.get_network("q2_target");
  a.opt_policy = c.get_adam("opt_policy");
  a.opt_q1 = c.get_adam("opt_q1");
  a.opt_q2 = c.get_adam("opt_q2");
  a.log_eta = c.get_scalar("log_eta");
  a.opt_eta = c.get_scalar_adam("opt_eta");
  a.train_steps = c.get_counter("train_steps");
  if (env_rng) env_rng->deserialize(c.get_text("env_rng"));
  return a;
}

}  // namespace flightrl::sac
