#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace flightrl {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Eigen::RowVectorXd;

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double deg2rad(double d) { return d * kPi / 180.0; }
inline constexpr double rad2deg(double r) { return r * 180.0 / kPi; }

// Configuration / construction problems: bad layer widths, invalid parameter
// values, malformed JSON.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// API misuse at runtime: shape mismatches, stepping an aborted simulator,
// sampling from an empty buffer.
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values where finite ones are required.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable or incompatible checkpoint files.
struct CheckpointError : std::runtime_error {
  explicit CheckpointError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem trouble writing logs, snapshots, or run directories.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace flightrl
