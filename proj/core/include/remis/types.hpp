#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace remis {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Real-valued function over the flattened state-action space.
using SAFunction = Vector;

/// Base class for all errors thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration (bad sizes, unknown keys, ...).
struct ConfigError : Error {
  using Error::Error;
};

/// A numerical routine could not produce a usable result.
struct NumericalError : Error {
  using Error::Error;
};

struct SingularMatrix : NumericalError {
  using NumericalError::NumericalError;
};

struct ZeroDenominator : NumericalError {
  using NumericalError::NumericalError;
};

/// A distribution construction ended up with an empty support.
struct EmptySupport : ConfigError {
  using ConfigError::ConfigError;
};

/// Flattened state-action index; fixed project-wide as s * n_actions + a.
inline Index sa_index(Index s, Index a, Index n_actions) { return s * n_actions + a; }

inline bool all_finite(const Vector& v) { return v.allFinite(); }
inline bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace remis
