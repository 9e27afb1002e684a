#pragma once

namespace flightrl::sim {

inline constexpr double kGravity = 9.80665;         // m/s^2
inline constexpr double kSeaLevelDensity = 1.225;   // kg/m^3
inline constexpr double kSeaLevelTemp = 288.15;     // K
inline constexpr double kLapseRate = 0.0065;        // K/m
inline constexpr double kGasConstantAir = 287.05;   // J/(kg K)

// Standard-atmosphere troposphere density (valid to 11 km).
double air_density(double altitude_m);

}  // namespace flightrl::sim
