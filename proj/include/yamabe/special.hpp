#ifndef YAMABE_SPECIAL_HPP
#define YAMABE_SPECIAL_HPP

#include <cmath>
#include <string>

#include "yamabe/errors.hpp"

namespace yamabe {

/// Dimensions above this are rejected everywhere: the gamma recursion for
/// vol(S^m) stays far from double overflow and the published tables stop
/// well below it.
inline constexpr int max_dimension = 200;

template <class Real = double>
inline constexpr Real pi_v = Real(3.14159265358979323846264338327950288L);

/// Gamma at a positive half-integer argument, by the exact recursion
/// gamma(1) = 1, gamma(1/2) = sqrt(pi), gamma(x+1) = x gamma(x).
/// No series approximation is involved; the only error is binary rounding.
template <class Real = double>
Real gamma_half_integer(Real x) {
  const Real two_x = Real(2) * x;
  if (!(x > Real(0)) || std::floor(two_x) != two_x)
    throw domain_error("gamma_half_integer: argument must be a positive half-integer");
  if (x > Real(max_dimension) + Real(0.5))
    throw domain_error("gamma_half_integer: argument too large (cap " +
                       std::to_string(max_dimension) + ")");
  const bool integral = std::floor(x) == x;
  Real result = integral ? Real(1) : std::sqrt(pi_v<Real>);
  for (Real t = integral ? Real(1) : Real(0.5); t < x; t += Real(1))
    result *= t;
  return result;
}

/// Volume of the round unit m-sphere, 2 pi^{(m+1)/2} / gamma((m+1)/2).
template <class Real = double>
Real sphere_volume(int m) {
  if (m < 1) throw domain_error("sphere_volume: dimension must be >= 1");
  if (m > max_dimension)
    throw domain_error("sphere_volume: dimension exceeds cap " +
                       std::to_string(max_dimension));
  const Real half = Real(m + 1) / Real(2);
  return Real(2) * std::pow(pi_v<Real>, half) / gamma_half_integer<Real>(half);
}

}  // namespace yamabe

#endif
