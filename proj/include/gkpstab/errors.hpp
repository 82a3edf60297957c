#pragma once

#include <stdexcept>
#include <string>

namespace gkpstab {

// Thrown when a matrix or vector has the wrong shape for an operation.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when a scalar parameter is outside its mathematical domain.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when structured input fails a structural check (non-symplectic
// encoder, non-integral lattice, ...).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a numerical procedure fails to converge or loses precision
// (ill-conditioned inversion, quadrature non-convergence, reduction residual).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown on malformed configuration (CLI or JSON).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gkpstab
