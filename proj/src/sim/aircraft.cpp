#include "flightrl/sim/aircraft.hpp"

#include <algorithm>
#include <cmath>

#include "flightrl/sim/atmosphere.hpp"

namespace flightrl::sim {

AircraftState::Vec AircraftState::as_vector() const {
  Vec x;
  x << p, q, r, u, v, w, phi, theta, psi, h, x_e, y_e;
  return x;
}

AircraftState AircraftState::from_vector(const Vec& x) {
  AircraftState s;
  s.p = x[0];
  s.q = x[1];
  s.r = x[2];
  s.u = x[3];
  s.v = x[4];
  s.w = x[5];
  s.phi = x[6];
  s.theta = x[7];
  s.psi = x[8];
  s.h = x[9];
  s.x_e = x[10];
  s.y_e = x[11];
  return s;
}

Eigen::Matrix3d AeroModel::inertia() const {
  Eigen::Matrix3d I;
  I << Ixx, 0, -Ixz, 0, Iyy, 0, -Ixz, 0, Izz;
  return I;
}

void AeroModel::validate() const {
  if (mass <= 0 || wing_area <= 0 || span <= 0 || chord <= 0)
    throw ConfigError("aero model: mass and geometry must be positive");
  if (Ixx <= 0 || Iyy <= 0 || Izz <= 0)
    throw ConfigError("aero model: principal inertias must be positive");
  if (Ixz * Ixz >= Ixx * Izz)
    throw ConfigError("aero model: inertia tensor must be positive definite");
  if (CL_max <= 0 || CD0 < 0 || k_induced < 0)
    throw ConfigError("aero model: CL_max must be positive, drag terms non-negative");
}

AeroCoefficients aero_coefficients(const AircraftState& x, const Surfaces& s,
                                   const AeroModel& m, double gust_alpha) {
  const double V = x.airspeed();
  if (!(V > 1.0)) throw NumericError("aero: airspeed collapsed (V <= 1 m/s)");

  const double alpha_aero = x.alpha() + gust_alpha;  // gusts offset the buildup only
  const double beta = x.beta();
  const double phat = x.p * m.span / (2.0 * V);
  const double qhat = x.q * m.chord / (2.0 * V);
  const double rhat = x.r * m.span / (2.0 * V);

  AeroCoefficients c;
  c.CL = m.CL0 + m.CL_alpha * alpha_aero + m.CL_q * qhat + m.CL_de * s.elevator;
  c.CL = std::clamp(c.CL, -m.CL_max, m.CL_max);  // stall-limited lift
  c.CD = m.CD0 + m.k_induced * c.CL * c.CL;
  c.CY = m.CY_beta * beta + m.CY_dr * s.rudder;

  c.Cl = m.Cl_beta * beta + m.Cl_p * phat + m.Cl_r * rhat + m.Cl_da * s.aileron +
         m.Cl_dr * s.rudder;
  // An aft cg lengthens the lift arm ahead of the cg: nose-up increment
  // proportional to CL.
  c.Cm = m.Cm0 + m.Cm_alpha * alpha_aero + m.Cm_q * qhat + m.Cm_de * s.elevator +
         (m.cg_shift_m / m.chord) * c.CL;
  c.Cn = m.Cn_beta * beta + m.Cn_p * phat + m.Cn_r * rhat + m.Cn_dr * s.rudder +
         m.Cn_da * s.aileron;
  return c;
}

AircraftState::Vec derivatives(const AircraftState& x, const Surfaces& s, double thrust,
                               const AeroModel& m, double gust_alpha) {
  const AeroCoefficients c = aero_coefficients(x, s, m, gust_alpha);
  const double V = x.airspeed();
  const double alpha = x.alpha();
  const double rho = air_density(x.h);
  const double qbar = 0.5 * rho * V * V;

  // Lift/drag act in the wind frame; resolve through the kinematic alpha.
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double X = qbar * m.wing_area * (c.CL * sa - c.CD * ca) + thrust;
  const double Y = qbar * m.wing_area * c.CY;
  const double Z = qbar * m.wing_area * (-c.CL * ca - c.CD * sa);

  const double L = qbar * m.wing_area * m.span * c.Cl;
  const double M = qbar * m.wing_area * m.chord * c.Cm;
  const double N = qbar * m.wing_area * m.span * c.Cn;

  const double g = kGravity;
  const double cphi = std::cos(x.phi), sphi = std::sin(x.phi);
  const double cth = std::cos(x.theta), sth = std::sin(x.theta);
  const double cpsi = std::cos(x.psi), spsi = std::sin(x.psi);

  AircraftState::Vec d;
  // Rotational dynamics: I wdot = M - w x (I w).
  const Eigen::Vector3d omega(x.p, x.q, x.r);
  const Eigen::Vector3d moments(L, M, N);
  const Eigen::Matrix3d I = m.inertia();
  const Eigen::Vector3d wdot = I.ldlt().solve(moments - omega.cross(I * omega));
  d[0] = wdot[0];
  d[1] = wdot[1];
  d[2] = wdot[2];

  // Translational dynamics in body axes.
  d[3] = x.r * x.v - x.q * x.w - g * sth + X / m.mass;
  d[4] = x.p * x.w - x.r * x.u + g * sphi * cth + Y / m.mass;
  d[5] = x.q * x.u - x.p * x.v + g * cphi * cth + Z / m.mass;

  // Euler kinematics (singular at |theta| = pi/2; the simulator aborts first).
  const double tth = sth / cth;
  d[6] = x.p + tth * (x.q * sphi + x.r * cphi);
  d[7] = x.q * cphi - x.r * sphi;
  d[8] = (x.q * sphi + x.r * cphi) / cth;

  // Altitude and ground track.
  d[9] = x.u * sth - (x.v * sphi + x.w * cphi) * cth;
  d[10] = x.u * cth * cpsi + x.v * (sphi * sth * cpsi - cphi * spsi) +
          x.w * (cphi * sth * cpsi + sphi * spsi);
  d[11] = x.u * cth * spsi + x.v * (sphi * sth * spsi + cphi * cpsi) +
          x.w * (cphi * sth * spsi - sphi * cpsi);
  return d;
}

TrimResult trim(const AeroModel& model, double altitude_m, double airspeed_mps) {
  model.validate();
  if (airspeed_mps <= 1.0) throw ConfigError("trim: airspeed must exceed 1 m/s");

  auto residual = [&](double alpha, double de, double thrust) -> Eigen::Vector3d {
    AircraftState x;
    x.u = airspeed_mps * std::cos(alpha);
    x.w = airspeed_mps * std::sin(alpha);
    x.theta = alpha;  // level flight: flight-path angle zero
    x.h = altitude_m;
    Surfaces s;
    s.elevator = de;
    const auto d = derivatives(x, s, thrust, model);
    return {d[3], d[5], d[1]};  // udot, wdot, qdot
  };

  double alpha = 0.03, de = 0.0, thrust = 0.1 * model.mass;
  TrimResult out;
  const double fd = 1e-7;
  for (int it = 0; it < 60; ++it) {
    const Eigen::Vector3d r0 = residual(alpha, de, thrust);
    out.residual = r0.cwiseAbs().maxCoeff();
    out.iterations = it;
    if (out.residual < 1e-10) {
      out.converged = true;
      break;
    }
    Eigen::Matrix3d J;
    J.col(0) = (residual(alpha + fd, de, thrust) - r0) / fd;
    J.col(1) = (residual(alpha, de + fd, thrust) - r0) / fd;
    J.col(2) = (residual(alpha, de, thrust + fd) - r0) / fd;
    const Eigen::Vector3d step = J.fullPivLu().solve(r0);
    alpha -= step[0];
    de -= step[1];
    thrust -= step[2];
  }

  out.state.u = airspeed_mps * std::cos(alpha);
  out.state.w = airspeed_mps * std::sin(alpha);
  out.state.theta = alpha;
  out.state.h = altitude_m;
  out.surfaces.elevator = de;
  out.thrust = thrust;
  return out;
}

}  // namespace flightrl::sim
