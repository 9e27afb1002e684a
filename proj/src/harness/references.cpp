#include "flightrl/harness/references.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

namespace flightrl::harness {
namespace {

// Piecewise-constant schedule: level[i] holds on [t[i], t[i+1]).
struct StepSchedule {
  std::vector<double> t_end;
  std::vector<double> level;

  double at(double t) const {
    const auto it = std::upper_bound(t_end.begin(), t_end.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - t_end.begin());
    return level[std::min(i, level.size() - 1)];
  }
};

StepSchedule draw_steps(Rng& rng, double lo, double hi, double dur_lo, double dur_hi,
                        double horizon) {
  StepSchedule s;
  double t = 0.0;
  while (t < horizon) {
    s.level.push_back(rng.uniform(lo, hi));
    t += rng.uniform(dur_lo, dur_hi);
    s.t_end.push_back(t);
  }
  return s;
}

// Piecewise-linear trajectory through (t[i], value[i]); clamped outside.
struct LinearSchedule {
  std::vector<double> t;
  std::vector<double> value;

  double at(double tt) const {
    if (tt <= t.front()) return value.front();
    if (tt >= t.back()) return value.back();
    const auto it = std::upper_bound(t.begin(), t.end(), tt);
    const std::size_t i = static_cast<std::size_t>(it - t.begin());
    const double f = (tt - t[i - 1]) / (t[i] - t[i - 1]);
    return value[i - 1] + f * (value[i] - value[i - 1]);
  }
};

void require(bool ok, const std::string& field) {
  if (!ok) throw ConfigError("reference program: invalid " + field);
}

}  // namespace

ProgramKind program_kind_from_name(const std::string& name) {
  if (name == "attitude_steps") return ProgramKind::attitude_steps;
  if (name == "altitude_profile") return ProgramKind::altitude_profile;
  if (name == "sinusoidal") return ProgramKind::sinusoidal;
  if (name == "triangular") return ProgramKind::triangular;
  throw ConfigError("unknown reference program '" + name + "'");
}

std::string program_kind_name(ProgramKind kind) {
  switch (kind) {
    case ProgramKind::attitude_steps: return "attitude_steps";
    case ProgramKind::altitude_profile: return "altitude_profile";
    case ProgramKind::sinusoidal: return "sinusoidal";
    case ProgramKind::triangular: return "triangular";
  }
  return "altitude_profile";
}

void ReferenceProgram::validate() const {
  require(h_period_s > 0, "h_period_s");
  require(phi_period_s > 0, "phi_period_s");
  require(h_amplitude_m >= 0, "h_amplitude_m");
  require(phi_amplitude_rad >= 0, "phi_amplitude_rad");
  require(theta_max_rad > theta_min_rad, "theta step range");
  require(phi_max_rad > phi_min_rad, "phi step range");
  require(step_min_s > 0 && step_max_s >= step_min_s, "step durations");
  require(profile_hold_s >= 0 && profile_leg_s > 0, "profile durations");
  require(profile_rate_mps > 0, "profile_rate_mps");
  require(bank1_off_s >= bank1_on_s && bank2_off_s >= bank2_on_s, "bank windows");
  require(leg_rate_max_mps >= leg_rate_min_mps && leg_rate_min_mps > 0, "leg rates");
  require(leg_min_s > 0 && leg_max_s >= leg_min_s, "leg durations");
}

ReferenceProgram sinusoidal_program(bool high_frequency) {
  ReferenceProgram p;
  p.kind = ProgramKind::sinusoidal;
  if (high_frequency) {
    p.h_period_s = 40.0;
    p.h_amplitude_m = 40.0;
    p.phi_period_s = 25.0;
    p.phi_amplitude_rad = deg2rad(25.0);
  }
  return p;
}

ReferenceProgram triangular_program(bool high_frequency) {
  ReferenceProgram p = sinusoidal_program(high_frequency);
  p.kind = ProgramKind::triangular;
  return p;
}

double triangle_wave(double phase01) {
  const double x = phase01 - std::floor(phase01);
  if (x < 0.25) return 4.0 * x;
  if (x < 0.75) return 2.0 - 4.0 * x;
  return 4.0 * x - 4.0;
}

env::AttitudeEnv::RefFn attitude_steps(const ReferenceProgram& p, double horizon_s,
                                       Rng& rng) {
  p.validate();
  auto theta = std::make_shared<StepSchedule>(
      draw_steps(rng, p.theta_min_rad, p.theta_max_rad, p.step_min_s, p.step_max_s,
                 horizon_s));
  auto phi = std::make_shared<StepSchedule>(
      draw_steps(rng, p.phi_min_rad, p.phi_max_rad, p.step_min_s, p.step_max_s,
                 horizon_s));
  return [theta, phi](double t) {
    env::AttitudeRefs r;
    r.theta = theta->at(t);
    r.phi = phi->at(t);
    return r;
  };
}

CascadeSignals cascade_signals(const ReferenceProgram& p, double h0) {
  p.validate();
  CascadeSignals out;
  switch (p.kind) {
    case ProgramKind::sinusoidal: {
      const double wh = 2.0 * kPi / p.h_period_s, wp = 2.0 * kPi / p.phi_period_s;
      const double ah = p.h_amplitude_m, ap = p.phi_amplitude_rad;
      out.h_ref = [h0, ah, wh](double t) { return h0 + ah * std::sin(wh * t); };
      out.phi_ref = [ap, wp](double t) { return ap * std::sin(wp * t); };
      out.duration_s = 90.0;
      return out;
    }
    case ProgramKind::triangular: {
      const double th = p.h_period_s, tp = p.phi_period_s;
      const double ah = p.h_amplitude_m, ap = p.phi_amplitude_rad;
      out.h_ref = [h0, ah, th](double t) { return h0 + ah * triangle_wave(t / th); };
      out.phi_ref = [ap, tp](double t) { return ap * triangle_wave(t / tp); };
      out.duration_s = 90.0;
      return out;
    }
    case ProgramKind::altitude_profile:
    case ProgramKind::attitude_steps: {
      // climb-hold-descend with a turn on each moving leg's second half
      const double hold = p.profile_hold_s, leg = p.profile_leg_s;
      const double top = h0 + p.profile_rate_mps * leg;
      LinearSchedule h;
      h.t = {0.0, hold, hold + leg, 2 * hold + leg, 2 * hold + 2 * leg,
             p.profile_duration_s()};
      h.value = {h0, h0, top, top, h0, h0};
      const double bank = p.profile_bank_rad;
      const double on1 = p.bank1_on_s, off1 = p.bank1_off_s;
      const double on2 = p.bank2_on_s, off2 = p.bank2_off_s;
      out.h_ref = [h](double t) { return h.at(t); };
      out.phi_ref = [bank, on1, off1, on2, off2](double t) {
        if (t >= on1 && t < off1) return bank;
        if (t >= on2 && t < off2) return -bank;
        return 0.0;
      };
      out.duration_s = p.profile_duration_s();
      return out;
    }
  }
  throw ConfigError("cascade_signals: unhandled program kind");
}

CascadeSignals altitude_training_signals(const ReferenceProgram& p, double h0,
                                         double horizon_s, Rng& rng) {
  p.validate();
  // Altitude: cycle climb -> hold -> descend -> hold with fresh rates and
  // durations each leg.
  auto h = std::make_shared<LinearSchedule>();
  h->t.push_back(0.0);
  h->value.push_back(h0);
  int mode = 0;  // 0 climb, 1 hold, 2 descend, 3 hold
  double t = 0.0, level = h0;
  while (t < horizon_s) {
    const double rate = rng.uniform(p.leg_rate_min_mps, p.leg_rate_max_mps);
    const double dur = rng.uniform(p.leg_min_s, p.leg_max_s);
    const double slope = mode == 0 ? rate : mode == 2 ? -rate : 0.0;
    t += dur;
    level += slope * dur;
    h->t.push_back(t);
    h->value.push_back(level);
    mode = (mode + 1) % 4;
  }
  auto phi = std::make_shared<StepSchedule>(draw_steps(
      rng, -p.profile_bank_rad, p.profile_bank_rad, p.leg_min_s, p.leg_max_s, horizon_s));

  CascadeSignals out;
  out.h_ref = [h](double tt) { return h->at(tt); };
  out.phi_ref = [phi](double tt) { return phi->at(tt); };
  out.duration_s = horizon_s;
  return out;
}

}  // namespace flightrl::harness
