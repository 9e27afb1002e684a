#include "flightrl/sim/faults.hpp"

#include <algorithm>
#include <cmath>

namespace flightrl::fault {

FailureKind failure_kind_from_name(const std::string& name) {
  if (name == "none") return FailureKind::none;
  if (name == "rudder_jam") return FailureKind::rudder_jam;
  if (name == "aileron_loss") return FailureKind::aileron_loss;
  if (name == "elevator_range") return FailureKind::elevator_range;
  if (name == "stabilizer_loss") return FailureKind::stabilizer_loss;
  if (name == "icing") return FailureKind::icing;
  if (name == "cg_shift") return FailureKind::cg_shift;
  throw ConfigError("unknown failure kind '" + name + "'");
}

std::string failure_kind_name(FailureKind kind) {
  switch (kind) {
    case FailureKind::none: return "none";
    case FailureKind::rudder_jam: return "rudder_jam";
    case FailureKind::aileron_loss: return "aileron_loss";
    case FailureKind::elevator_range: return "elevator_range";
    case FailureKind::stabilizer_loss: return "stabilizer_loss";
    case FailureKind::icing: return "icing";
    case FailureKind::cg_shift: return "cg_shift";
  }
  return "none";
}

std::pair<sim::Surfaces, sim::AeroModel> apply_failure(const FailureSpec& spec, double t,
                                                       const sim::Surfaces& commanded,
                                                       const sim::AeroModel& model) {
  sim::Surfaces s = commanded;
  sim::AeroModel m = model;
  if (spec.kind == FailureKind::none || t < spec.onset_s) return {s, m};

  switch (spec.kind) {
    case FailureKind::none:
      break;
    case FailureKind::rudder_jam:
      s.rudder = spec.jam_angle;
      break;
    case FailureKind::aileron_loss:
      s.aileron *= spec.aileron_scale;
      break;
    case FailureKind::elevator_range:
      s.elevator = std::clamp(s.elevator, -spec.elevator_limit, spec.elevator_limit);
      break;
    case FailureKind::stabilizer_loss:
      // Damaged horizontal tail: elevator lift (which also carries its drag
      // contribution through the polar) and pitch-rate damping collapse.
      m.CL_de *= spec.stabilizer_scale;
      m.Cm_de *= spec.stabilizer_scale;
      m.Cm_q *= spec.stabilizer_scale;
      break;
    case FailureKind::icing:
      m.CL_max *= spec.icing_cl_scale;
      m.CD0 += spec.icing_cd0_add;
      break;
    case FailureKind::cg_shift:
      m.cg_shift_m = spec.cg_shift_aft_m;
      break;
  }
  return {s, m};
}

SensorReading observe(const sim::AircraftState& x, const NoiseSpec& spec, Rng& rng) {
  SensorReading o;
  o.p = x.p;
  o.q = x.q;
  o.r = x.r;
  o.theta = x.theta;
  o.phi = x.phi;
  o.beta = x.beta();
  o.h = x.h;
  if (!spec.enabled) return o;
  o.p += spec.rate_bias + spec.rate_sd * rng.gaussian();
  o.q += spec.rate_bias + spec.rate_sd * rng.gaussian();
  o.r += spec.rate_bias + spec.rate_sd * rng.gaussian();
  o.theta += spec.att_bias + spec.att_sd * rng.gaussian();
  o.phi += spec.att_bias + spec.att_sd * rng.gaussian();
  o.beta += spec.beta_bias + spec.beta_sd * rng.gaussian();
  o.h += spec.alt_bias + spec.alt_sd * rng.gaussian();
  return o;
}

double gust_alpha(const GustSpec& spec, double t, double airspeed) {
  if (!spec.enabled) return 0.0;
  const bool inside =
      (t >= spec.first_onset_s && t < spec.first_onset_s + spec.duration_s) ||
      (t >= spec.second_onset_s && t < spec.second_onset_s + spec.duration_s);
  if (!inside) return 0.0;
  // Updraft rotates the incoming flow nose-up as seen by the wing.
  return std::atan2(spec.updraft_mps, std::max(airspeed, 1.0));
}

}  // namespace flightrl::fault
