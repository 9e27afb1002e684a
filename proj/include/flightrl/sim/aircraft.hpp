#pragma once

#include <Eigen/Dense>

#include "flightrl/types.hpp"

namespace flightrl::sim {

// Rigid-body state of a fixed-wing aircraft. Body axes: x forward, y right,
// z down; Euler angles roll/pitch/yaw; h is altitude above sea level
// (positive up), x_e/y_e track ground position for bookkeeping only.
struct AircraftState {
  double p = 0, q = 0, r = 0;        // body rates, rad/s
  double u = 0, v = 0, w = 0;        // body-axis velocity, m/s
  double phi = 0, theta = 0, psi = 0;  // Euler angles, rad
  double h = 0;                      // altitude, m
  double x_e = 0, y_e = 0;           // earth-frame position, m

  double airspeed() const { return std::sqrt(u * u + v * v + w * w); }
  double alpha() const { return std::atan2(w, u); }
  double beta() const {
    const double V = airspeed();
    return V > 0 ? std::asin(v / V) : 0.0;
  }

  using Vec = Eigen::Matrix<double, 12, 1>;
  Vec as_vector() const;
  static AircraftState from_vector(const Vec& x);
  bool finite() const { return as_vector().allFinite(); }
};

// Control surface deflections, rad. Sign conventions: positive elevator is
// trailing edge down (nose-down moment), positive aileron rolls right,
// positive rudder yaws right (C_n_dr > 0) and pushes the tail left
// (C_Y_dr < 0).
struct Surfaces {
  double elevator = 0, aileron = 0, rudder = 0;
};

// Coefficient-buildup aerodynamic model plus mass/geometry. Defaults model a
// mid-size twin-jet business aircraft (~4.5 t) cruising in the lower
// troposphere. cg_shift_m moves the center of gravity aft of the reference
// point and feeds the pitching moment through the lift arm.
struct AeroModel {
  // geometry and mass
  double wing_area = 24.6;   // m^2
  double span = 13.3;        // m
  double chord = 2.0;        // mean aerodynamic chord, m
  double mass = 4500.0;      // kg
  double Ixx = 13000.0, Iyy = 26000.0, Izz = 35000.0, Ixz = 1500.0;  // kg m^2

  // lift: CL = CL0 + CL_alpha a + CL_q qhat + CL_de de, clipped at +-CL_max
  double CL0 = 0.25, CL_alpha = 5.25, CL_q = 4.7, CL_de = 0.43, CL_max = 1.40;
  // drag polar
  double CD0 = 0.025, k_induced = 0.055;
  // side force
  double CY_beta = -0.72, CY_dr = -0.17;
  // rolling moment
  double Cl_beta = -0.095, Cl_p = -0.47, Cl_r = 0.096, Cl_da = 0.15, Cl_dr = -0.006;
  // pitching moment
  double Cm0 = 0.034, Cm_alpha = -1.6, Cm_q = -15.5, Cm_de = -1.35;
  // yawing moment
  double Cn_beta = 0.13, Cn_p = -0.025, Cn_r = -0.16, Cn_dr = 0.075, Cn_da = -0.002;

  double cg_shift_m = 0.0;  // aft-positive cg displacement, m

  Eigen::Matrix3d inertia() const;
  void validate() const;
};

// Dimensionless force/moment coefficients for a given state. `gust_alpha`
// is an additive angle-of-attack increment applied inside the buildup
// (vertical gusts enter this way); lift is clipped at +-CL_max.
struct AeroCoefficients {
  double CL = 0, CD = 0, CY = 0;
  double Cl = 0, Cm = 0, Cn = 0;
};

AeroCoefficients aero_coefficients(const AircraftState& x, const Surfaces& s,
                                   const AeroModel& model, double gust_alpha = 0.0);

// Continuous-time rigid-body derivatives with the coefficient buildup. The
// force resolution from wind to body axes keeps the kinematic angle of
// attack. Throws NumericError if the state has no airspeed.
AircraftState::Vec derivatives(const AircraftState& x, const Surfaces& s, double thrust,
                               const AeroModel& model, double gust_alpha = 0.0);

// Classic RK4 step of `derivatives` with surfaces and thrust held over the
// interval; `gust_alpha_at(t)` may vary within the step.
template <class GustFn>
AircraftState rk4_step(const AircraftState& x0, const Surfaces& s, double thrust,
                       const AeroModel& model, double t, double dt,
                       GustFn&& gust_alpha_at) {
  const auto f = [&](const AircraftState::Vec& xv, double tt) {
    return derivatives(AircraftState::from_vector(xv), s, thrust, model,
                       gust_alpha_at(tt));
  };
  const AircraftState::Vec x = x0.as_vector();
  const AircraftState::Vec k1 = f(x, t);
  const AircraftState::Vec k2 = f(x + 0.5 * dt * k1, t + 0.5 * dt);
  const AircraftState::Vec k3 = f(x + 0.5 * dt * k2, t + 0.5 * dt);
  const AircraftState::Vec k4 = f(x + dt * k3, t + dt);
  return AircraftState::from_vector(x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

// Longitudinal equilibrium at the given altitude and airspeed: solves for
// angle of attack, elevator, and thrust such that udot, wdot, qdot vanish in
// wings-level flight (Newton iteration on a finite-difference Jacobian).
struct TrimResult {
  AircraftState state;
  Surfaces surfaces;
  double thrust = 0;
  double residual = 0;  // max |udot|, |wdot|, |qdot| at the solution
  int iterations = 0;
  bool converged = false;
};

TrimResult trim(const AeroModel& model, double altitude_m, double airspeed_mps);

}  // namespace flightrl::sim
