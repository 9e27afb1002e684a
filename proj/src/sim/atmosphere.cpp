#include "flightrl/sim/atmosphere.hpp"

#include <algorithm>
#include <cmath>

namespace flightrl::sim {

double air_density(double altitude_m) {
  const double h = std::clamp(altitude_m, 0.0, 11000.0);
  const double t_ratio = 1.0 - kLapseRate * h / kSeaLevelTemp;
  const double exponent = kGravity / (kLapseRate * kGasConstantAir) - 1.0;
  return kSeaLevelDensity * std::pow(t_ratio, exponent);
}

}  // namespace flightrl::sim
