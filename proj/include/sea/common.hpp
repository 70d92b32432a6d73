#pragma once

#include <Eigen/Dense>
#include <limits>
#include <stdexcept>
#include <string>

namespace sea {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Entries below this magnitude are treated as numerically zero when a
// support is extracted from a solver output.
inline constexpr double kSupportZeroTol = 1e-12;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};
struct EmptySupport : Error {
  using Error::Error;
};
struct ZeroColumn : Error {
  explicit ZeroColumn(int column)
      : Error("column " + std::to_string(column + 1) + " has zero norm"),
        index(column) {}
  int index;
};
struct NoConvergence : Error {
  using Error::Error;
};
struct MissingGroundTruth : Error {
  using Error::Error;
};
struct DegenerateRIP : Error {
  using Error::Error;
};
struct TooLarge : Error {
  using Error::Error;
};
struct ZeroObservation : Error {
  using Error::Error;
};
struct ZeroMass : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

}  // namespace sea
