#include "flightrl/harness/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "flightrl/io/csv.hpp"

namespace flightrl::harness {
namespace {

double safe_range(double lo, double hi) { return std::max(hi - lo, 1e-9); }

}  // namespace

EvalReport evaluate_cascade(const sac::SacAgent& attitude, const sac::SacAgent& altitude,
                            const env::ScenarioConfig& scenario,
                            const ReferenceProgram& program,
                            const std::string& log_path) {
  const CascadeSignals sig = cascade_signals(program, scenario.altitude_m);
  env::CascadeEnv e(scenario, [&attitude](const Eigen::Matrix<double, 9, 1>& obs) {
    return Eigen::Vector3d(sac::mean_action(attitude, obs));
  });
  e.set_reference(sig.h_ref, sig.phi_ref);
  Eigen::Vector2d obs = e.reset();

  const double dt = scenario.sim.dt;
  const auto ticks = static_cast<long>(std::llround(sig.duration_s / dt));

  EvalReport rep;
  rep.duration_s = sig.duration_s;
  double h_lo = std::numeric_limits<double>::infinity(), h_hi = -h_lo;
  double p_lo = h_lo, p_hi = -h_lo;
  for (long k = 0; k <= ticks; ++k) {
    const double t = k * dt;
    h_lo = std::min(h_lo, sig.h_ref(t));
    h_hi = std::max(h_hi, sig.h_ref(t));
    p_lo = std::min(p_lo, sig.phi_ref(t));
    p_hi = std::max(p_hi, sig.phi_ref(t));
  }
  rep.range_h = safe_range(h_lo, h_hi);
  rep.range_phi = safe_range(p_lo, p_hi);
  rep.range_beta = kBetaRange;

  std::unique_ptr<io::CsvWriter> log;
  if (!log_path.empty()) {
    log = std::make_unique<io::CsvWriter>(
        log_path,
        std::vector<std::string>{
            "t",      "h",      "h_ref",  "phi",    "phi_ref", "beta",   "theta",
            "theta_ref", "airspeed", "p",   "q",      "r",       "de_cmd", "da_cmd",
            "dr_cmd", "de",     "da",     "dr",     "thrust",  "a_alt",  "r_alt",
            "r_att"});
    rep.log_path = log_path;
  }

  double sum_h = 0.0, sum_phi = 0.0, sum_beta = 0.0;
  long counted = 0;
  for (long k = 0; k < ticks; ++k) {
    const double a = sac::mean_action(altitude, obs)[0];
    const auto st = e.step(a);
    const sim::AircraftState& x = e.simulator().state();
    if (x.finite()) {
      const double t = e.time();
      sum_h += std::abs(sig.h_ref(t) - x.h);
      sum_phi += std::abs(sig.phi_ref(t) - x.phi);
      sum_beta += std::abs(x.beta());
      ++counted;
      if (log) {
        const sim::Surfaces& eff = e.simulator().effective_surfaces();
        log->row({t, x.h, sig.h_ref(t), x.phi, sig.phi_ref(t), x.beta(), x.theta,
                  e.theta_ref(), x.airspeed(), x.p, x.q, x.r, e.surface_cmd()[0],
                  e.surface_cmd()[1], e.surface_cmd()[2], eff.elevator, eff.aileron,
                  eff.rudder, e.simulator().thrust(), a, st.reward, st.reward_att});
      }
    }
    obs = st.obs;
    if (st.aborted) {
      rep.aborted = true;
      break;
    }
  }

  if (counted > 0) {
    rep.mae_h = sum_h / counted;
    rep.mae_phi = sum_phi / counted;
    rep.mae_beta = sum_beta / counted;
    rep.nmae_h = rep.mae_h / rep.range_h;
    rep.nmae_phi = rep.mae_phi / rep.range_phi;
    rep.nmae_beta = rep.mae_beta / rep.range_beta;
  } else {
    rep.nmae_h = rep.nmae_phi = rep.nmae_beta = 1.0;  // nothing flyable to score
  }
  rep.aggregate = (rep.nmae_h + rep.nmae_phi + rep.nmae_beta) / 3.0;
  rep.success = !rep.aborted && rep.aggregate < kSuccessThreshold;
  return rep;
}

AttitudeEval evaluate_attitude(const sac::SacAgent& agent,
                               const env::ScenarioConfig& scenario,
                               const ReferenceProgram& program, int episodes,
                               double episode_s, Rng& rng) {
  if (episodes < 1) throw UsageError("evaluate_attitude: episodes must be >= 1");
  env::AttitudeEnv e(scenario);
  const auto ticks = static_cast<long>(std::llround(episode_s / scenario.sim.dt));

  AttitudeEval out;
  for (int ep = 0; ep < episodes; ++ep) {
    e.set_reference(attitude_steps(program, episode_s, rng));
    Eigen::Matrix<double, 9, 1> obs = e.reset();
    double sum_b = 0.0, sum_t = 0.0, sum_p = 0.0;
    double t_lo = std::numeric_limits<double>::infinity(), t_hi = -t_lo;
    double p_lo = t_lo, p_hi = -t_lo;
    long counted = 0;
    for (long k = 0; k < ticks; ++k) {
      const auto st = e.step(Eigen::Vector3d(sac::mean_action(agent, obs)));
      const sim::AircraftState& x = e.simulator().state();
      if (x.finite()) {
        const env::AttitudeRefs refs = e.current_refs();
        sum_b += std::abs(x.beta());
        sum_t += std::abs(refs.theta - x.theta);
        sum_p += std::abs(refs.phi - x.phi);
        t_lo = std::min(t_lo, refs.theta);
        t_hi = std::max(t_hi, refs.theta);
        p_lo = std::min(p_lo, refs.phi);
        p_hi = std::max(p_hi, refs.phi);
        ++counted;
      }
      obs = st.obs;
      if (st.aborted) {
        out.aborted = true;
        break;
      }
    }
    if (counted > 0) {
      out.nmae_beta += sum_b / counted / kBetaRange / episodes;
      out.nmae_theta += sum_t / counted / safe_range(t_lo, t_hi) / episodes;
      out.nmae_phi += sum_p / counted / safe_range(p_lo, p_hi) / episodes;
    } else {
      out.nmae_beta += 1.0 / episodes;
      out.nmae_theta += 1.0 / episodes;
      out.nmae_phi += 1.0 / episodes;
    }
  }
  out.worst = std::max({out.nmae_beta, out.nmae_theta, out.nmae_phi});
  return out;
}

}  // namespace flightrl::harness
