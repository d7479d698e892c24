#ifndef YAMABE_ERRORS_HPP
#define YAMABE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace yamabe {

/// Precondition violation on a public operation (bad dimension, bad range, ...).
struct domain_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A root bracket that must hold by construction failed to hold.
/// Distinct from non-convergence: it indicates wrong coefficients, not a
/// slow iteration.
struct bracket_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An iteration exceeded its step budget without meeting its tolerance.
struct convergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two independent evaluation routes disagreed beyond tolerance.
struct cross_validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An internal equivalence that holds algebraically was violated at runtime.
struct internal_check_error : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace yamabe

#endif
