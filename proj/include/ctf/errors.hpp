#pragma once

#include <stdexcept>
#include <string>

namespace ctf {

/// Base class for every fault raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or geometry.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("config error: " + what) {}
};

/// Propagation or filtering produced NaN/inf.
class NonFiniteError : public Error {
 public:
  explicit NonFiniteError(const std::string& what) : Error("non-finite: " + what) {}
};

/// The trajectory cannot reach the requested layer.
class MissedLayerError : public Error {
 public:
  explicit MissedLayerError(const std::string& what) : Error("missed layer: " + what) {}
};

/// Residual covariance is not positive definite or its condition number exceeds 1e12.
class SingularResidualCovError : public Error {
 public:
  explicit SingularResidualCovError(const std::string& what)
      : Error("singular residual covariance: " + what) {}
};

/// Malformed input data (event or track files).
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error("data error: " + what) {}
};

/// Truth matching requested on an event that carries no truth record.
class NoTruthError : public Error {
 public:
  NoTruthError() : Error("event has no truth record") {}
};

}  // namespace ctf
