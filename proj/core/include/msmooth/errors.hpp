#pragma once

#include <stdexcept>
#include <string>

namespace msmooth {

/// Invalid parameters or mutually inconsistent configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Stability violations, quadrature non-convergence, failed experiments.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File format or stream problems.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace msmooth
