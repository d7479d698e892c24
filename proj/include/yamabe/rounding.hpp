#ifndef YAMABE_ROUNDING_HPP
#define YAMABE_ROUNDING_HPP

#include <cmath>
#include <utility>

namespace yamabe {

/// Rounding rules used by the emitted tables. The sphere row rounds to the
/// nearest multiple of 1/10 (half away from zero); lower-bound rows always
/// round down, so a printed bound is still a bound.
enum class Rounding { NearestTenth, FloorTenth, None };

/// Values closer than this to a rounding boundary are re-evaluated at
/// extended precision before a digit is emitted.
inline constexpr double rounding_guard_window = 5e-4;

namespace detail {

// Snap v*10 to an integer when it is within representation noise of one.
// Decimal literals like 45.1 scale to 450.999...96; without the snap a
// floor would drop them a whole tenth.
template <class Real>
Real scaled_tenths(Real v) {
  const Real y = v * Real(10);
  const Real n = std::nearbyint(y);
  return (std::abs(y - n) < Real(1e-9) * std::fmax(Real(1), std::abs(n))) ? n
                                                                          : y;
}

}  // namespace detail

/// Nearest multiple of 0.1, ties away from zero.
template <class Real = double>
Real round_nearest_tenth(Real v) {
  const Real y = detail::scaled_tenths(std::abs(v));
  return std::copysign(std::floor(y + Real(0.5)) / Real(10), v);
}

/// Largest multiple of 0.1 not exceeding v.
template <class Real = double>
Real round_floor_tenth(Real v) {
  return std::floor(detail::scaled_tenths(v)) / Real(10);
}

template <class Real = double>
Real round_tenth(Real v, Rounding rule) {
  switch (rule) {
    case Rounding::NearestTenth:
      return round_nearest_tenth(v);
    case Rounding::FloorTenth:
      return round_floor_tenth(v);
    case Rounding::None:
      break;
  }
  return v;
}

/// True when v lies within the guard window of a boundary of `rule`
/// (odd multiples of 0.05 for nearest, multiples of 0.1 for floor).
inline bool near_tenth_boundary(double v, Rounding rule,
                                double window = rounding_guard_window) {
  double scaled = 0;
  switch (rule) {
    case Rounding::NearestTenth:
      scaled = std::abs(v) * 10 + 0.5;  // boundaries at n + 0.5
      break;
    case Rounding::FloorTenth:
      scaled = v * 10;
      break;
    case Rounding::None:
      return false;
  }
  const double frac = std::abs(scaled - std::nearbyint(scaled));
  return frac < window * 10;
}

/// Round v, re-deriving it through `extended` (a callable returning the
/// same quantity in long double) whenever v sits inside the guard window.
template <class Extended>
double round_tenth_guarded(double v, Rounding rule, Extended&& extended) {
  if (rule == Rounding::None) return v;
  if (near_tenth_boundary(v, rule))
    return static_cast<double>(
        round_tenth<long double>(std::forward<Extended>(extended)(), rule));
  return round_tenth(v, rule);
}

}  // namespace yamabe

#endif
