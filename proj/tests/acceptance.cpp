// Acceptance gates: ten executable criteria, one verdict line each. The
// heavy training gates run at desk scale by default; the full-scale cascade
// gate is opt-in (--full). Pass --reuse <dir> to cache trained checkpoints
// between invocations while iterating; an official run uses a fresh dir.
//
//   acceptance [--full] [--only 1,4,10] [--reuse dir]
//
// Exit status: number of executed criteria that failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "flightrl/env/cascade_env.hpp"
#include "flightrl/env/tracking.hpp"
#include "flightrl/harness/evaluate.hpp"
#include "flightrl/harness/matrix.hpp"
#include "flightrl/harness/toy.hpp"
#include "flightrl/harness/train.hpp"
#include "flightrl/io/config.hpp"
#include "flightrl/nn/network.hpp"
#include "flightrl/sac/agent.hpp"
#include "flightrl/sim/simulator.hpp"
#include "sac_test_util.hpp"

using namespace flightrl;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  enum class Status { pass, fail, skip } status = Status::fail;
  std::string detail;
};

Outcome pass(std::string detail) { return {Outcome::Status::pass, std::move(detail)}; }
Outcome fail(std::string detail) { return {Outcome::Status::fail, std::move(detail)}; }
Outcome skip(std::string detail) { return {Outcome::Status::skip, std::move(detail)}; }

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// Trained agents flow between the training gates so the matrix gate can
// reuse the attitude policy instead of retraining.
struct Context {
  bool full = false;
  std::string reuse_dir;  // optional checkpoint cache

  bool have_attitude = false;
  sac::SacAgent attitude;  // best desk-scale attitude policy seen
  double attitude_worst = std::numeric_limits<double>::infinity();

  bool have_full_pair = false;
  sac::SacAgent full_attitude, full_altitude;
};

std::string cache_path(const Context& ctx, const std::string& name) {
  return ctx.reuse_dir.empty() ? std::string()
                               : (fs::path(ctx.reuse_dir) / name).string();
}

// ---------------------------------------------------------------- criterion 1

Outcome gradient_suite(Context&) {
  const auto t0 = std::chrono::steady_clock::now();
  double max_rel = 0.0;
  long entries = 0;
  for (int net = 0; net < 50; ++net) {
    Rng rng(4100 + net);
    const int in = 2 + static_cast<int>(rng.uniform_int(4));
    const int out = 1 + static_cast<int>(rng.uniform_int(3));
    const int depth = 1 + static_cast<int>(rng.uniform_int(3));
    std::vector<nn::LayerSpec> spec;
    int prev = in;
    for (int d = 0; d < depth; ++d) {
      const int w = 2 + static_cast<int>(rng.uniform_int(4));
      spec.push_back({prev, w, nn::LayerKind::hidden});
      prev = w;
    }
    spec.push_back({prev, out, nn::LayerKind::linear});

    nn::NetworkParams p = nn::xavier_init(spec, rng);
    // Xavier leaves the normalization at identity; randomize it so the
    // gain/offset gradient paths carry signal.
    for (std::size_t l = 0; l < p.layers.size(); ++l) {
      if (p.spec[l].kind != nn::LayerKind::hidden) continue;
      for (Eigen::Index j = 0; j < p.layers[l].gain.size(); ++j) {
        p.layers[l].gain[j] = rng.uniform(0.6, 1.6);
        p.layers[l].offset[j] = rng.uniform(-0.4, 0.4);
      }
    }

    const int batch = 1 + static_cast<int>(rng.uniform_int(3));
    MatrixXd x;
    // Central differences are only trusted away from ReLU kinks.
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 200) return fail(fmt("net %d: no kink-free input found", net));
      x = rng.gaussian_matrix(in, batch);
      if (testutil::min_abs_preactivation(p, x) > 5e-3) break;
    }
    const MatrixXd g = rng.gaussian_matrix(out, batch);

    nn::GradientTape tape;
    nn::forward(p, x, &tape);
    const nn::Gradients grads = nn::backward(p, tape, g);
    auto loss = [&] { return (g.array() * nn::forward(p, x).array()).sum(); };
    const auto chk = testutil::fd_check_params(p, grads.layers, loss);
    max_rel = std::max(max_rel, chk.max_rel_err);
    entries += chk.entries;
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0).count();
  if (max_rel >= 1e-4) return fail(fmt("max rel err %.3e >= 1e-4", max_rel));
  if (secs >= 60.0) return fail(fmt("took %.1f s >= 60 s", secs));
  return pass(fmt("max rel err %.2e over 50 nets / %ld entries in %.1f s", max_rel,
                  entries, secs));
}

// ---------------------------------------------------------------- criterion 2

// One linear layer written out long-hand so the losses can be recomputed
// with scalar arithmetic.
nn::NetworkParams linear_net(std::initializer_list<double> w,
                             std::initializer_list<double> b) {
  nn::NetworkParams p;
  const int out = static_cast<int>(b.size());
  const int in = static_cast<int>(w.size()) / out;
  p.spec = {{in, out, nn::LayerKind::linear}};
  p.layers.resize(1);
  p.layers[0].W.resize(out, in);
  int i = 0;
  for (double v : w) { p.layers[0].W(i / in, i % in) = v; ++i; }
  p.layers[0].b.resize(out);
  i = 0;
  for (double v : b) p.layers[0].b[i++] = v;
  return p;
}

Outcome micro_oracle(Context&) {
  sac::SacAgent a;
  a.cfg.state_dim = 1;
  a.cfg.action_dim = 1;
  a.cfg.entropy_target = -1.0;
  a.cfg.entropy_target_set = true;
  a.policy = linear_net({0.2, 0.1}, {-0.1, -0.5});  // rows: mu, log_sigma
  a.q1 = linear_net({0.3, -0.2}, {0.1});
  a.q2 = linear_net({-0.1, 0.4}, {0.0});
  a.q1_target = linear_net({0.25, -0.15}, {0.05});
  a.q2_target = linear_net({-0.05, 0.35}, {-0.02});
  a.log_eta = std::log(0.7);
  const double eta = 0.7, gamma = a.cfg.discount;

  sac::Batch batch;
  batch.s = (MatrixXd(1, 3) << 0.4, -0.8, 1.2).finished();
  batch.a = (MatrixXd(1, 3) << 0.25, -0.5, 0.7).finished();
  batch.r = (RowVectorXd(3) << 0.5, -0.3, 1.0).finished();
  batch.s_next = (MatrixXd(1, 3) << 0.9, 0.1, -0.6).finished();

  // Scalar model: mu = 0.2 s - 0.1, log_sigma = 0.1 s - 0.5 (never clamped
  // here), critics linear in [s; a].
  auto log_pi = [](double s, double xi, double* action) {
    const double mu = 0.2 * s - 0.1;
    const double ls = 0.1 * s - 0.5;
    const double u = mu + std::exp(ls) * xi;
    const double t = std::tanh(u);
    *action = t;
    return -0.5 * std::log(2.0 * kPi) - ls - 0.5 * xi * xi - std::log(1.0 - t * t);
  };
  auto q1 = [](double s, double act) { return 0.3 * s - 0.2 * act + 0.1; };
  auto q2 = [](double s, double act) { return -0.1 * s + 0.4 * act + 0.0; };
  auto qt1 = [](double s, double act) { return 0.25 * s - 0.15 * act + 0.05; };
  auto qt2 = [](double s, double act) { return -0.05 * s + 0.35 * act - 0.02; };

  // The losses draw their policy noise from the rng they are handed; the
  // oracle replays the same stream.
  double critic_hand = 0.0;
  {
    const MatrixXd xi = Rng(1301).gaussian_matrix(1, 3);
    for (int i = 0; i < 3; ++i) {
      double a_next = 0.0;
      const double lp = log_pi(batch.s_next(0, i), xi(0, i), &a_next);
      const double soft = std::min(qt1(batch.s_next(0, i), a_next),
                                   qt2(batch.s_next(0, i), a_next)) -
                          eta * lp;
      const double y = batch.r[i] + gamma * soft;
      const double d1 = q1(batch.s(0, i), batch.a(0, i)) - y;
      const double d2 = q2(batch.s(0, i), batch.a(0, i)) - y;
      critic_hand += d1 * d1 + d2 * d2;
    }
    critic_hand /= 6.0;
  }
  double policy_hand = 0.0;
  {
    const MatrixXd xi = Rng(1302).gaussian_matrix(1, 3);
    for (int i = 0; i < 3; ++i) {
      double act = 0.0;
      const double lp = log_pi(batch.s(0, i), xi(0, i), &act);
      policy_hand +=
          std::min(q1(batch.s(0, i), act), q2(batch.s(0, i), act)) - eta * lp;
    }
    policy_hand /= 3.0;
  }
  double temp_hand = 0.0;
  {
    const MatrixXd xi = Rng(1303).gaussian_matrix(1, 3);
    for (int i = 0; i < 3; ++i) {
      double act = 0.0;
      temp_hand += -eta * (log_pi(batch.s(0, i), xi(0, i), &act) +
                           a.cfg.entropy_target);
    }
    temp_hand /= 3.0;
  }

  Rng r1(1301), r2(1302), r3(1303);
  const double d_critic = std::abs(sac::critic_loss(a, batch, r1).loss - critic_hand);
  const double d_policy =
      std::abs(sac::policy_objective(a, batch, r2).objective - policy_hand);
  const double d_temp = std::abs(sac::temperature_loss(a, batch, r3).loss - temp_hand);
  const double worst = std::max({d_critic, d_policy, d_temp});
  if (worst > 1e-10)
    return fail(fmt("hand-oracle mismatch: critic %.2e policy %.2e temperature %.2e",
                    d_critic, d_policy, d_temp));
  return pass(fmt("critic/policy/temperature within %.1e of scalar oracle", worst));
}

// ---------------------------------------------------------------- criterion 3

Outcome toy_vs_oracle(Context&) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string runs;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const harness::ToyResult r = harness::toy_benchmark(seed, 50'000);
    runs += fmt("%ss%llu %.1f/%.1f", runs.empty() ? "" : " ",
                static_cast<unsigned long long>(seed), r.final_score, r.oracle.score);
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0).count();
    if (r.pass)
      return pass(fmt("seed %llu reached %.1f >= 90%% of oracle %.1f in %.0f s",
                      static_cast<unsigned long long>(seed), r.final_score,
                      r.oracle.score, secs));
  }
  return fail("no seed of 5 reached 90% of the oracle: " + runs);
}

// ---------------------------------------------------------------- criterion 4

Outcome env_arithmetic(Context&) {
  auto close = [](double a, double b, double tol = 1e-12) {
    return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
  };
  // Saturation landmarks of the weighted attitude cost.
  if (!close(env::attitude_reward({0.0, kPi / 6.0, 0.0}), -1.0 / 3.0))
    return fail("attitude reward at pi/6 pitch error != -1/3");
  if (!close(env::attitude_reward({kPi / 24.0, 0.0, 0.0}), -1.0 / 3.0))
    return fail("attitude reward at pi/24 sideslip error != -1/3");
  if (env::attitude_reward({kPi, -kPi, kPi}) != -1.0)
    return fail("fully saturated attitude reward != -1");
  const Eigen::Vector3d w = env::attitude_error_weights();
  if (!close(w[0], 24.0 / kPi) || !close(w[1], 6.0 / kPi) || !close(w[2], 6.0 / kPi))
    return fail("attitude error weights are not (6/pi)*[4,1,1]");

  // Altitude cost saturates at 240 m.
  if (!close(env::altitude_reward(120.0), -0.5) || env::altitude_reward(500.0) != -1.0)
    return fail("altitude reward normalization is off");

  // Pitch-reference rate limit: 0.1 deg per 10 ms tick at full deflection.
  if (!close(env::pitch_ref_increment(1.0, 0.01), deg2rad(0.1)))
    return fail("pitch reference increment at full action != 0.1 deg/tick");

  // Surface increments: 1/100 of each actuator band per tick, with the
  // asymmetric elevator reaching different bounds per sign.
  const sim::ActuatorConfig act;
  const Eigen::Vector3d up = env::attitude_increment(Eigen::Vector3d::Ones(), act);
  const Eigen::Vector3d dn = env::attitude_increment(-Eigen::Vector3d::Ones(), act);
  if (!close(up[0], deg2rad(14.90) / 100.0) || !close(dn[0], deg2rad(-20.05) / 100.0))
    return fail("elevator increment bounds are not +0.1490/-0.2005 deg per tick");
  if (!close(up[1], deg2rad(20.0) / 100.0) || !close(up[2], deg2rad(22.0) / 100.0))
    return fail("aileron/rudder increment bounds are off");
  return pass("cost landmarks, rate limits, and increment bounds all exact");
}

// ---------------------------------------------------------------- criterion 5

Outcome simulator_properties(Context&) {
  // Symmetric flight: with zero lateral inputs nothing couples into the
  // lateral states, so they stay exactly zero.
  {
    sim::Simulator sim{sim::SimConfig{}};
    sim.reset(2000.0, 90.0);
    const sim::Surfaces held = sim.actuator_positions();
    for (int i = 0; i < 6000; ++i) {
      const auto& x = sim.step(held);
      if (x.v != 0.0 || x.p != 0.0 || x.r != 0.0 || x.phi != 0.0 || x.psi != 0.0 ||
          x.y_e != 0.0)
        return fail(fmt("lateral state nonzero at t=%.2f s", sim.time()));
    }
  }
  // Trim hold: 60 s without visible drift.
  double drift_theta = 0.0, drift_v = 0.0, drift_h = 0.0;
  {
    sim::Simulator sim{sim::SimConfig{}};
    const auto& x0 = sim.reset(2000.0, 90.0);
    const double theta0 = x0.theta;
    const sim::Surfaces held = sim.actuator_positions();
    for (int i = 0; i < 6000; ++i) {
      const auto& x = sim.step(held);
      drift_theta = std::max(drift_theta, std::abs(x.theta - theta0));
      drift_v = std::max(drift_v, std::abs(x.airspeed() - 90.0) / 90.0);
      drift_h = std::max(drift_h, std::abs(x.h - 2000.0) / 2000.0);
    }
    if (std::max({drift_theta, drift_v, drift_h}) >= 1e-3)
      return fail(fmt("trim drift over 60 s: theta %.1e rad, V %.1e rel, h %.1e rel",
                      drift_theta, drift_v, drift_h));
  }
  // Integrator convergence order from endpoint distances at dt, dt/2, dt/4.
  auto endpoint = [](double dt) {
    sim::SimConfig cfg;
    cfg.damper.enabled = false;
    cfg.throttle.enabled = false;
    cfg.dt = dt;
    sim::Simulator sim(cfg);
    sim.reset(2000.0, 90.0);
    const sim::Surfaces held = sim.actuator_positions();
    sim::AircraftState x = sim.state();
    x.q += 0.05;
    x.phi += 0.2;
    sim.set_state(x);
    const int steps = static_cast<int>(std::llround(10.0 / dt));
    for (int i = 0; i < steps; ++i) sim.step(held);
    return sim.state().as_vector();
  };
  const VectorXd e1 = endpoint(0.01), e2 = endpoint(0.005), e3 = endpoint(0.0025);
  const double order = std::log2((e1 - e2).norm() / (e2 - e3).norm());
  if (!(order >= 3.5)) return fail(fmt("observed convergence order %.2f < 3.5", order));

  // Actuator 63.2%-rise time, interpolated exactly for an exponential.
  double rise = -1.0;
  {
    sim::SimConfig cfg;
    cfg.damper.enabled = false;
    cfg.throttle.enabled = false;
    sim::Simulator sim(cfg);
    sim.reset(2000.0, 90.0);
    sim::Surfaces cmd = sim.actuator_positions();
    const double from = cmd.elevator;
    cmd.elevator = from + deg2rad(5.0);
    const double target = from + (1.0 - std::exp(-1.0)) * deg2rad(5.0);
    double t_prev = 0.0, pos_prev = from;
    for (int i = 0; i < 30; ++i) {
      sim.step(cmd);
      const double pos = sim.actuator_positions().elevator;
      if (pos >= target) {
        rise = t_prev + cfg.dt * std::log((cmd.elevator - pos_prev) /
                                          (cmd.elevator - target)) /
                            std::log((cmd.elevator - pos_prev) /
                                     (cmd.elevator - pos));
        break;
      }
      t_prev = sim.time();
      pos_prev = pos;
    }
    const double tau = sim::ActuatorConfig{}.time_constant;
    if (rise < 0.0 || std::abs(rise - tau) / tau > 0.02)
      return fail(fmt("63%%-rise %.4f s vs time constant %.4f s (>2%% off)", rise, tau));
  }
  return pass(fmt("lateral zeros 60 s; drift %.1e; order %.2f; rise within %.2f%%",
                  std::max({drift_theta, drift_v, drift_h}), order,
                  100.0 * std::abs(rise - 1.0 / 30.0) * 30.0));
}

// ---------------------------------------------------------------- criterion 6

Outcome failure_semantics(Context&) {
  using fault::FailureKind;
  const FailureKind kinds[] = {FailureKind::rudder_jam,      FailureKind::aileron_loss,
                               FailureKind::elevator_range,  FailureKind::stabilizer_loss,
                               FailureKind::icing,           FailureKind::cg_shift};
  // Common command script: trim plus low-amplitude sinusoids on every axis.
  auto command = [](const sim::Surfaces& trim, double t) {
    sim::Surfaces s = trim;
    s.elevator += deg2rad(2.0) * std::sin(2.0 * kPi * t / 7.0);
    s.aileron = deg2rad(1.5) * std::sin(2.0 * kPi * t / 5.0);
    s.rudder = deg2rad(1.0) * std::sin(2.0 * kPi * t / 3.0);
    return s;
  };
  for (FailureKind kind : kinds) {
    sim::SimConfig nominal;
    sim::SimConfig failed = nominal;
    failed.failure.kind = kind;
    failed.failure.onset_s = 10.0;
    sim::Simulator a(nominal), b(failed);
    a.reset(2000.0, 90.0);
    b.reset(2000.0, 90.0);
    const sim::Surfaces trim = a.actuator_positions();
    for (int i = 0; i < 1100; ++i) {
      const sim::Surfaces cmd = command(trim, a.time());
      const auto& xa = a.step(cmd);
      const auto& xb = b.step(cmd);
      if (b.time() <= 10.0) {
        if (xa.as_vector() != xb.as_vector())
          return fail(fmt("%s: pre-onset trajectory diverges at t=%.2f s",
                          fault::failure_kind_name(kind).c_str(), b.time()));
      } else if (kind == FailureKind::rudder_jam) {
        if (b.effective_surfaces().rudder != deg2rad(-15.0))
          return fail(fmt("rudder_jam: effective rudder %.4f deg at t=%.2f s",
                          rad2deg(b.effective_surfaces().rudder), b.time()));
      }
    }
  }
  // Elevator clipping engages exactly at the surviving band edge.
  {
    sim::SimConfig failed;
    failed.failure.kind = FailureKind::elevator_range;
    failed.failure.onset_s = 10.0;
    sim::Simulator sim(failed);
    sim.reset(2000.0, 90.0);
    sim::Surfaces cmd = sim.actuator_positions();
    cmd.elevator = deg2rad(10.0);
    bool pinned = false;
    for (int i = 0; i < 1600 && !sim.aborted(); ++i) {
      sim.step(cmd);
      const double eff = sim.effective_surfaces().elevator;
      if (sim.time() > 10.0) {
        if (std::abs(eff) > deg2rad(2.5))
          return fail(fmt("elevator_range: |effective| %.3f deg exceeds 2.5 deg",
                          rad2deg(eff)));
        pinned = pinned || eff == deg2rad(2.5);
      }
    }
    if (!pinned) return fail("elevator_range: clip bound never reached");
  }
  return pass("six presets bit-identical pre-onset; jam and clip bounds exact");
}

// ---------------------------------------------------------------- criterion 7

Outcome noise_statistics(Context&) {
  sim::Simulator sim{sim::SimConfig{}};
  const sim::AircraftState x = sim.reset(2000.0, 90.0);
  fault::NoiseSpec spec;
  spec.enabled = true;
  Rng rng(20'250'101);

  constexpr int kN = 1'000'000;
  const char* names[7] = {"p", "q", "r", "theta", "phi", "beta", "h"};
  const double truth[7] = {x.p, x.q, x.r, x.theta, x.phi, x.beta(), x.h};
  const double bias[7] = {spec.rate_bias, spec.rate_bias, spec.rate_bias,
                          spec.att_bias,  spec.att_bias,  spec.beta_bias,
                          spec.alt_bias};
  const double sd[7] = {spec.rate_sd, spec.rate_sd, spec.rate_sd, spec.att_sd,
                        spec.att_sd,  spec.beta_sd, spec.alt_sd};
  double sum[7] = {}, sumsq[7] = {};
  for (int i = 0; i < kN; ++i) {
    const fault::SensorReading o = fault::observe(x, spec, rng);
    const double dev[7] = {o.p - truth[0],     o.q - truth[1],   o.r - truth[2],
                           o.theta - truth[3], o.phi - truth[4], o.beta - truth[5],
                           o.h - truth[6]};
    for (int c = 0; c < 7; ++c) {
      sum[c] += dev[c];
      sumsq[c] += dev[c] * dev[c];
    }
  }
  double worst_mean_sigma = 0.0, worst_sd_rel = 0.0;
  for (int c = 0; c < 7; ++c) {
    const double mean = sum[c] / kN;
    const double var = (sumsq[c] - kN * mean * mean) / (kN - 1);
    const double sdev = std::sqrt(var);
    const double mean_sigmas = std::abs(mean - bias[c]) / (sd[c] / std::sqrt(kN));
    const double sd_rel = std::abs(sdev - sd[c]) / sd[c];
    worst_mean_sigma = std::max(worst_mean_sigma, mean_sigmas);
    worst_sd_rel = std::max(worst_sd_rel, sd_rel);
    if (mean_sigmas > 3.0)
      return fail(fmt("%s: empirical bias off by %.2f sigma", names[c], mean_sigmas));
    if (sd_rel > 0.01)
      return fail(fmt("%s: empirical SD off by %.2f%%", names[c], 100.0 * sd_rel));
  }
  return pass(fmt("10^6 draws x 7 channels: bias within %.2f sigma, SD within %.2f%%",
                  worst_mean_sigma, 100.0 * worst_sd_rel));
}

// ---------------------------------------------------------------- criterion 8

// Short-budget attitude recipe: anneal the learning rate to zero inside the
// run and take two gradient steps per environment step. The production
// defaults keep the long-run schedule; at 2e5 steps that leaves the policy
// undertrained, so the gate compresses the schedule instead of the task.
sac::AgentConfig desk_attitude_agent() {
  sac::AgentConfig a = io::default_config().attitude_agent;
  a.lr = {4e-4, 0.0, 200'000};
  return a;
}
constexpr int kDeskUpdatesPerStep = 2;

sac::SacAgent train_or_reuse_attitude(const Context& ctx, std::uint64_t seed,
                                      std::int64_t steps, bool* diverged,
                                      bool* reused) {
  const std::string cached = cache_path(ctx, fmt("attitude_s%llu_final.ckpt",
                                                 static_cast<unsigned long long>(seed)));
  *diverged = false;
  *reused = false;
  if (!cached.empty() && fs::exists(cached)) {
    *reused = true;
    return sac::load_agent(cached);
  }
  const io::ExperimentConfig cfg = io::default_config();
  harness::StageConfig run;
  run.total_steps = steps;
  run.episode_s = 20.0;
  run.updates_per_step = kDeskUpdatesPerStep;
  run.heartbeat_every = 50'000;
  run.out_dir = ctx.reuse_dir;
  run.stage_name = fmt("attitude_s%llu", static_cast<unsigned long long>(seed));
  Rng rng(seed);
  sac::SacAgent agent = sac::make_agent(desk_attitude_agent(), rng);
  const harness::StageResult res = harness::train_attitude(
      agent, io::make_scenario(cfg.scenario), io::make_program(cfg.program), run, rng);
  *diverged = res.diverged;
  return agent;
}

Outcome desk_attitude_training(Context& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  const io::ExperimentConfig cfg = io::default_config();
  const env::ScenarioConfig scenario = io::make_scenario(cfg.scenario);
  const harness::ReferenceProgram program = io::make_program(cfg.program);

  std::string per_seed;
  int seeds_done = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    bool diverged = false, reused = false;
    sac::SacAgent agent =
        train_or_reuse_attitude(ctx, seed, 200'000, &diverged, &reused);
    if (diverged) {
      per_seed += fmt("%ss%llu diverged", per_seed.empty() ? "" : "; ",
                      static_cast<unsigned long long>(seed));
      ++seeds_done;
      continue;
    }
    Rng eval_rng(777);
    const harness::AttitudeEval ev =
        harness::evaluate_attitude(agent, scenario, program, 10, 20.0, eval_rng);
    per_seed += fmt("%ss%llu%s th %.1f%% ph %.1f%% be %.1f%%",
                    per_seed.empty() ? "" : "; ",
                    static_cast<unsigned long long>(seed), reused ? "*" : "",
                    100.0 * ev.nmae_theta, 100.0 * ev.nmae_phi, 100.0 * ev.nmae_beta);
    if (ev.worst < ctx.attitude_worst) {
      ctx.attitude_worst = ev.worst;
      ctx.attitude = agent;
      ctx.have_attitude = true;
    }
    ++seeds_done;
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0).count();
    if (ev.nmae_theta < 0.10 && ev.nmae_phi < 0.10 && ev.nmae_beta < 0.10)
      return pass(fmt("seed %llu under 10%% per channel (%s) in %.0f s",
                      static_cast<unsigned long long>(seed), per_seed.c_str(), secs));
    // Stop before a seed that would overrun the hour-scale budget.
    if (seed < 5 && secs + secs / seeds_done > 3900.0)
      return fail(fmt("time budget: %.0f s after %d seeds, none passing: %s", secs,
                      seeds_done, per_seed.c_str()));
  }
  return fail("no seed of 5 under 10% per channel: " + per_seed);
}

// ---------------------------------------------------------------- criterion 9

sac::SacAgent train_altitude_stage(const Context& ctx, const sac::SacAgent& attitude,
                                   std::uint64_t seed, std::int64_t steps,
                                   const std::string& cache_name, bool* diverged,
                                   bool* reused) {
  const std::string cached = cache_path(ctx, cache_name);
  *diverged = false;
  *reused = false;
  if (!cached.empty() && fs::exists(cached)) {
    *reused = true;
    return sac::load_agent(cached);
  }
  const io::ExperimentConfig cfg = io::default_config();
  harness::StageConfig run;
  run.total_steps = steps;
  run.episode_s = 120.0;
  run.heartbeat_every = 50'000;
  run.out_dir = ctx.reuse_dir;
  run.stage_name = cache_name.size() > 11  // strip "_final.ckpt"
                       ? cache_name.substr(0, cache_name.size() - 11)
                       : cache_name;
  Rng rng(9'000 + seed);
  sac::SacAgent agent = sac::make_agent(cfg.altitude_agent, rng);
  const harness::StageResult res = harness::train_altitude(
      agent, attitude, io::make_scenario(cfg.scenario), io::make_program(cfg.program),
      run, rng);
  *diverged = res.diverged;
  return agent;
}

Outcome full_cascade_training(Context& ctx) {
  if (!ctx.full)
    return skip("long-running gate; rerun with --full to execute");
  const io::ExperimentConfig cfg = io::default_config();
  const env::ScenarioConfig nominal = io::make_scenario(cfg.scenario);
  const harness::ReferenceProgram program = io::make_program(cfg.program);

  bool diverged = false, reused = false;
  sac::SacAgent attitude = [&] {
    const std::string cached = cache_path(ctx, "full_attitude_final.ckpt");
    if (!cached.empty() && fs::exists(cached)) {
      reused = true;
      return sac::load_agent(cached);
    }
    harness::StageConfig run;
    run.total_steps = 1'000'000;
    run.episode_s = 20.0;
    run.heartbeat_every = 100'000;
    run.out_dir = ctx.reuse_dir;
    run.stage_name = "full_attitude";
    Rng rng(cfg.seed);
    sac::SacAgent agent = sac::make_agent(cfg.attitude_agent, rng);
    diverged = harness::train_attitude(agent, nominal, program, run, rng).diverged;
    return agent;
  }();
  if (diverged) return fail("attitude stage diverged");

  bool alt_diverged = false, alt_reused = false;
  sac::SacAgent altitude =
      train_altitude_stage(ctx, attitude, cfg.seed, 1'000'000,
                           "full_altitude_final.ckpt", &alt_diverged, &alt_reused);
  if (alt_diverged) return fail("altitude stage diverged");

  const harness::EvalReport nom =
      harness::evaluate_cascade(attitude, altitude, nominal, program);
  std::string detail = fmt("nominal aggregate %.2f%%%s", 100.0 * nom.aggregate,
                           reused || alt_reused ? " (reused)" : "");
  bool ok = !nom.aborted && nom.aggregate < 0.05;
  if (nom.aborted) detail += " ABORTED";

  for (const char* preset : {"rudder_jam", "aileron_loss", "elevator_range",
                             "stabilizer_loss", "icing", "cg_shift"}) {
    env::ScenarioConfig s = io::scenario_preset(cfg, preset);
    const harness::EvalReport r =
        harness::evaluate_cascade(attitude, altitude, s, program);
    detail += fmt("; %s %.1f%%%s", preset, 100.0 * r.aggregate,
                  r.aborted ? " ABORTED" : "");
    ok = ok && !r.aborted;
  }
  ctx.full_attitude = attitude;
  ctx.full_altitude = altitude;
  ctx.have_full_pair = true;
  return ok ? pass(detail) : fail(detail);
}

// --------------------------------------------------------------- criterion 10

Outcome matrix_shape(Context& ctx) {
  const io::ExperimentConfig cfg = io::default_config();
  sac::SacAgent attitude, altitude;
  std::string source;
  if (ctx.have_full_pair) {
    attitude = ctx.full_attitude;
    altitude = ctx.full_altitude;
    source = "full-scale pair";
  } else {
    if (!ctx.have_attitude) {
      bool diverged = false, reused = false;
      ctx.attitude = train_or_reuse_attitude(ctx, 1, 200'000, &diverged, &reused);
      if (diverged) return fail("fallback attitude training diverged");
      ctx.have_attitude = true;
    }
    attitude = ctx.attitude;
    bool diverged = false, reused = false;
    altitude = train_altitude_stage(ctx, attitude, 1, 200'000,
                                    "altitude_s1_final.ckpt", &diverged, &reused);
    if (diverged) return fail("desk-scale altitude training diverged");
    source = "desk-scale pair";
  }

  const std::string csv = ctx.reuse_dir.empty()
                              ? std::string()
                              : cache_path(ctx, "matrix.csv");
  const auto rows = harness::robustness_matrix(
      attitude, altitude, io::make_scenario(cfg.scenario), io::make_program(cfg.program),
      csv);
  if (rows.size() != 8) return fail(fmt("expected 8 rows, got %zu", rows.size()));
  double low = 0.0, high = 0.0;
  int n_low = 0, n_high = 0;
  std::string detail = source + ":";
  for (const auto& row : rows) {
    if (!std::isfinite(row.report.aggregate) || row.report.duration_s <= 0.0)
      return fail(row.name + ": no report");
    detail += fmt(" %s %.1f%%", row.name.c_str(), 100.0 * row.report.aggregate);
    if (row.kind == harness::ProgramKind::altitude_profile) continue;
    (row.high_frequency ? high : low) += row.report.aggregate;
    (row.high_frequency ? n_high : n_low) += 1;
  }
  detail += fmt("; waves high %.1f%% vs low %.1f%% (recorded, not gated)",
                100.0 * high / n_high, 100.0 * low / n_low);
  return pass(detail);
}

// -----------------------------------------------------------------------------

struct Gate {
  int id;
  const char* name;
  std::function<Outcome(Context&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--full") {
      ctx.full = true;
    } else if (arg == "--reuse" && i + 1 < argc) {
      ctx.reuse_dir = argv[++i];
      fs::create_directories(ctx.reuse_dir);
    } else if (arg == "--only" && i + 1 < argc) {
      std::istringstream list(argv[++i]);
      std::string tok;
      while (std::getline(list, tok, ',')) only.push_back(std::stoi(tok));
    } else {
      std::fprintf(stderr, "usage: acceptance [--full] [--only 1,2] [--reuse dir]\n");
      return 64;
    }
  }

  const Gate gates[] = {
      {1, "gradient suite", gradient_suite},
      {2, "actor-critic micro-oracle", micro_oracle},
      {3, "toy benchmark vs tuned PD", toy_vs_oracle},
      {4, "reward and action-map arithmetic", env_arithmetic},
      {5, "simulator properties", simulator_properties},
      {6, "failure semantics", failure_semantics},
      {7, "sensor-noise statistics", noise_statistics},
      {8, "desk-scale attitude training", desk_attitude_training},
      {9, "full-scale cascade training", full_cascade_training},
      {10, "robustness matrix shape", matrix_shape},
  };

  int failed = 0, passed = 0, skipped = 0;
  for (const Gate& gate : gates) {
    if (!only.empty() && std::find(only.begin(), only.end(), gate.id) == only.end())
      continue;
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      out = gate.run(ctx);
    } catch (const std::exception& e) {
      out = fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0).count();
    const char* tag = out.status == Outcome::Status::pass   ? "PASS"
                      : out.status == Outcome::Status::fail ? "FAIL"
                                                            : "SKIP";
    std::printf("[%s] %2d %s: %s (%.1f s)\n", tag, gate.id, gate.name,
                out.detail.c_str(), secs);
    std::fflush(stdout);
    if (out.status == Outcome::Status::pass) ++passed;
    if (out.status == Outcome::Status::fail) ++failed;
    if (out.status == Outcome::Status::skip) ++skipped;
  }
  std::printf("acceptance: %d passed, %d failed, %d skipped\n", passed, failed,
              skipped);
  return failed;
}
