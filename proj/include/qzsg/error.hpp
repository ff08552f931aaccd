#ifndef QZSG_ERROR_HPP
#define QZSG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace qzsg {

// Shapes of operands do not line up (wrong side length, non power of two, ...).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An input violates a documented invariant (non-Hermitian, not PSD, bad config).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical routine failed: eigensolver did not converge, a spectral
// function was undefined at an eigenvalue, a divergence is infinite.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qzsg

#endif  // QZSG_ERROR_HPP
