#ifndef YAMABE_CODIM3_HPP
#define YAMABE_CODIM3_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "yamabe/constants.hpp"
#include "yamabe/errors.hpp"
#include "yamabe/model_space.hpp"
#include "yamabe/rounding.hpp"

namespace yamabe::codim3 {

/// General lower bound for Q* of the model space with 0 <= k <= m-3, given
/// a lower bound Q0 for the c = 0 value:
///   [Q0/Q1 - w(c) (Q0/Q1 - c^{2(m-k-1)/m})] Q1,
///   w(c) = c^2 (k+1)k / ((1-c^2)(m-k-1)(m-k-2) + c^2 (k+1)k),
/// with Q1 = Q*(S^m). Extended to the endpoints: Q0 at c = 0 (the weight
/// vanishes) and Q1 at c = 1 (the exact conformal value there; for k >= 1
/// this is also the interior limit).
template <class Real = double>
Real general_lower_bound(const ModelSpaceParams& p, Real q0_lower) {
  validate(p);
  const int m = p.m;
  const int k = p.k;
  if (k > m - 3)
    throw domain_error("general_lower_bound: requires k <= m-3");
  if (m < 3) throw domain_error("general_lower_bound: requires m >= 3");
  const Real q1 = yamabe_sphere<Real>(m);
  if (!(q0_lower > Real(0)) || q0_lower > q1 * (Real(1) + Real(1e-12)))
    throw domain_error(
        "general_lower_bound: Q0 lower bound must lie in (0, Q*(S^m)]");
  const Real c = Real(p.c);
  if (c == Real(0)) return q0_lower;
  if (c == Real(1)) return q1;
  const Real c2 = c * c;
  const Real hyper = c2 * Real(k + 1) * Real(k);
  const Real sphere = (Real(1) - c2) * Real(m - k - 1) * Real(m - k - 2);
  const Real weight = hyper / (sphere + hyper);
  const Real ratio = q0_lower / q1;
  const Real drop = std::pow(c, Real(2) * Real(m - k - 1) / Real(m));
  return (ratio - weight * (ratio - drop)) * q1;
}

/// Explicit lower bound for the c = 0 value Q_0 in the codimension-3 case
/// k = m-3:
///   m a / (24^{3/m} ((m-3) a_{m-3})^{(m-3)/m})
///     * Q*(S^{m-3})^{(m-3)/m} * Q*(S^3)^{3/m}
/// with a = 4(m-1)/(m-2) and a_{m-3} = 4(m-4)/(m-5). Needs m >= 6.
template <class Real = double>
Real qhat0(int m) {
  if (m < 6) throw domain_error("qhat0: requires m >= 6");
  const Real a = Real(4) * Real(m - 1) / Real(m - 2);
  const Real a_m3 = Real(4) * Real(m - 4) / Real(m - 5);
  const Real inv_m = Real(1) / Real(m);
  const Real front =
      Real(m) * a /
      (std::pow(Real(24), Real(3) * inv_m) *
       std::pow(Real(m - 3) * a_m3, Real(m - 3) * inv_m));
  return front * std::pow(yamabe_sphere<Real>(m - 3), Real(m - 3) * inv_m) *
         std::pow(yamabe_sphere<Real>(3), Real(3) * inv_m);
}

/// The one-parameter family whose infimum over s = c^2 in [0, 1] bounds the
/// codimension-3 threshold from below:
///   L_m(s) = ((1-s) 2 Qhat0 + s^{1+2/m} (m-2)(m-3) Q1)
///            / (2 + s ((m-2)(m-3) - 2)).
/// L_m(0) = Qhat0, L_m(1) = Q*(S^m). The curve object carries the per-m
/// constants so grid scans do not recompute the gamma recursion.
template <class Real = double>
struct LCurve {
  int m;
  Real q0, q1, b;
  Real operator()(Real s) const {
    if (!(s >= Real(0) && s <= Real(1)))
      throw domain_error("L: s must lie in [0, 1]");
    const Real numer = (Real(1) - s) * Real(2) * q0 +
                       std::pow(s, Real(1) + Real(2) / Real(m)) * b * q1;
    return numer / (Real(2) + s * (b - Real(2)));
  }
};

template <class Real = double>
LCurve<Real> l_curve(int m) {
  if (m < 6) throw domain_error("L: requires m >= 6");
  return {m, qhat0<Real>(m), yamabe_sphere<Real>(m),
          Real(m - 2) * Real(m - 3)};
}

template <class Real = double>
Real L(int m, Real s) {
  return l_curve<Real>(m)(s);
}

/// Critical-point function of L_m: up to the positive factor
/// (2 + s(B-2))^2 / B, the derivative dL/ds equals
///   f(s) = s^{2/m+1} A0 + s^{2/m} A1 + A2,
/// A0 = (2/m) Q1 (B-2), A1 = 2(2/m+1) Q1, A2 = -2 Qhat0, B = (m-2)(m-3).
/// f has exactly one zero in (0, 1).
template <class Real = double>
struct FPoly {
  Real a0, a1, a2;
  int m;
  Real operator()(Real s) const {
    const Real e = Real(2) / Real(m);
    return std::pow(s, e + Real(1)) * a0 + std::pow(s, e) * a1 + a2;
  }
};

template <class Real = double>
FPoly<Real> f_poly(int m) {
  if (m < 6) throw domain_error("f_poly: requires m >= 6");
  const Real q1 = yamabe_sphere<Real>(m);
  const Real q0 = qhat0<Real>(m);
  const Real b = Real(m - 2) * Real(m - 3);
  FPoly<Real> f;
  f.m = m;
  f.a0 = Real(2) / Real(m) * q1 * (b - Real(2));
  f.a1 = Real(2) * (Real(2) / Real(m) + Real(1)) * q1;
  f.a2 = Real(-2) * q0;
  return f;
}

/// Bracket endpoint for the unique root of f, expressed in the s = c^2
/// variable: the minorant s^{2/m} A1 + A2 of f vanishes at
/// s = (m Qhat0 / ((m+2) Q1))^{m/2}, beyond which f is positive. As a
/// c-value this is c2 = (m Qhat0 / ((m+2) Q1))^{m/4}.
template <class Real = double>
Real c2_point(int m) {
  if (m < 6) throw domain_error("c2_point: requires m >= 6");
  const Real ratio =
      Real(m) * qhat0<Real>(m) / (Real(m + 2) * yamabe_sphere<Real>(m));
  return std::pow(ratio, Real(m) / Real(4));
}

/// Minimizer of the closed-form numerator: c3^{4/m} =
/// 2m Qhat0 / ((m+2)(m-2)(m-3) Q1).
template <class Real = double>
Real c3_point(int m) {
  if (m < 6) throw domain_error("c3_point: requires m >= 6");
  const Real b = Real(m - 2) * Real(m - 3);
  const Real ratio = Real(2) * Real(m) * qhat0<Real>(m) /
                     (Real(m + 2) * b * yamabe_sphere<Real>(m));
  return std::pow(ratio, Real(m) / Real(4));
}

/// Unique zero of f in (0, 1), found by bisection on [ulp, c2^2].
/// f < 0 at the left end and f(c2^2) > 0; a sign violation at either end
/// is a bracket failure (wrong coefficients), reported separately from
/// running out of iterations.
template <class Real = double>
Real root_f(int m) {
  const FPoly<Real> f = f_poly<Real>(m);
  Real lo = std::numeric_limits<Real>::min();
  const Real c2 = c2_point<Real>(m);
  Real hi = c2 * c2;
  if (!(f(lo) < Real(0) && f(hi) > Real(0)))
    throw bracket_error("root_f: sign conditions violated on [ulp, c2^2] at m=" +
                        std::to_string(m));
  for (int iter = 0; iter < 200; ++iter) {
    if (hi - lo <= Real(1e-14)) return (lo + hi) / Real(2);
    const Real mid = lo + (hi - lo) / Real(2);
    (f(mid) < Real(0) ? lo : hi) = mid;
  }
  throw convergence_error("root_f: bisection failed to reach tolerance at m=" +
                          std::to_string(m));
}

/// Checks that sign(f(s)) matches the sign of a central finite-difference
/// derivative of L on a grid over (0, 1), excluding a neighbourhood of the
/// root. A failure indicates a transcription error in the coefficients.
template <class Real = double>
bool sign_equivalence_ok(int m, int grid_points = 1000,
                         Real fd_step = Real(1e-6),
                         Real root_exclusion = Real(1e-4)) {
  const FPoly<Real> f = f_poly<Real>(m);
  const LCurve<Real> curve = l_curve<Real>(m);
  const Real s_root = root_f<Real>(m);
  for (int i = 1; i < grid_points; ++i) {
    const Real s = Real(i) / Real(grid_points);
    if (std::abs(s - s_root) <= root_exclusion) continue;
    if (s - fd_step <= Real(0) || s + fd_step >= Real(1)) continue;
    const Real deriv =
        (curve(s + fd_step) - curve(s - fd_step)) / (Real(2) * fd_step);
    if ((f(s) < Real(0)) != (deriv < Real(0))) return false;
  }
  return true;
}

template <class Real = double>
struct MinimumOfL {
  Real c_star;          // argmin as a c-value, sqrt of the minimizing s
  Real value;           // inf over c in [0,1] of L_m(c^2)
  bool grid_fallback;   // true when the critical-point route was abandoned
};

namespace detail {

// Scan over the minimization variable c itself; near the minimum the
// induced s-resolution 2c dc is much finer than a raw s-grid.
template <class Real>
MinimumOfL<Real> grid_minimum(int m, Real step) {
  const LCurve<Real> curve = l_curve<Real>(m);
  const long n = std::lround(Real(1) / step);
  Real best = curve(Real(0));
  Real best_c = Real(0);
  for (long i = 1; i <= n; ++i) {
    const Real c = (i == n) ? Real(1) : Real(i) * step;
    const Real v = curve(c * c);
    if (v < best) {
      best = v;
      best_c = c;
    }
  }
  return {best_c, best, true};
}

}  // namespace detail

/// Infimum of L_m(c^2) over c in [0, 1]. The authority is the
/// critical-point route (endpoints plus the unique zero of f); a dense grid
/// scan must agree to 1e-8 relative or the call fails. If the
/// finite-difference sign check rejects the critical-point route, the grid
/// minimum is returned instead with the fallback flag set.
template <class Real = double>
MinimumOfL<Real> infimum_L(int m, Real grid_step = Real(1e-5)) {
  if (!sign_equivalence_ok<Real>(m)) return detail::grid_minimum(m, grid_step);
  const LCurve<Real> curve = l_curve<Real>(m);
  const Real s_root = root_f<Real>(m);
  Real best = curve(Real(0));
  Real best_s = Real(0);
  for (const Real s : {s_root, Real(1)}) {
    const Real v = curve(s);
    if (v < best) {
      best = v;
      best_s = s;
    }
  }
  const MinimumOfL<Real> scanned = detail::grid_minimum(m, grid_step);
  if (std::abs(scanned.value - best) > Real(1e-8) * std::abs(best))
    throw cross_validation_error(
        "infimum_L: grid scan disagrees with critical-point minimum at m=" +
        std::to_string(m));
  return {std::sqrt(best_s), best, false};
}

/// Fully explicit positive lower bound for the codimension-3 threshold:
///   ((1-c3^2) 2 Qhat0 + c3^{4/m+2} (m-2)(m-3) Q1)
///   / (2 + c2^2 ((m-2)(m-3) - 2)).
/// Weaker than the numeric infimum but closed form.
template <class Real = double>
Real closed_form_bound(int m) {
  if (m < 6) throw domain_error("closed_form_bound: requires m >= 6");
  const Real q0 = qhat0<Real>(m);
  const Real q1 = yamabe_sphere<Real>(m);
  const Real b = Real(m - 2) * Real(m - 3);
  const Real c2 = c2_point<Real>(m);
  const Real c3 = c3_point<Real>(m);
  if (!(c2 > Real(0) && c2 < Real(1) && c3 > Real(0) && c3 < Real(1)))
    throw internal_check_error(
        "closed_form_bound: auxiliary points left (0, 1) at m=" +
        std::to_string(m));
  const Real numer = (Real(1) - c3 * c3) * Real(2) * q0 +
                     std::pow(c3, Real(4) / Real(m) + Real(2)) * b * q1;
  return numer / (Real(2) + c2 * c2 * (b - Real(2)));
}

/// Everything the codimension-3 section computes for one dimension,
/// including the digits the tables emit for it.
template <class Real = double>
struct Report {
  int m;
  Real q1;           // Q*(S^m)
  Real qhat0;        // lower bound for the c = 0 value
  Real a0, a1, a2;   // coefficients of f
  Real s_root;       // unique zero of f in (0, 1)
  Real c_star;       // argmin of L_m(c^2)
  Real inf_L;        // numeric infimum
  Real c2, c3;       // auxiliary points of the closed form
  Real closed_form;  // explicit bound
  bool grid_fallback;
  double q1_rounded;     // nearest 0.1, guard applied
  double inf_L_rounded;  // floor 0.1, guard applied
};

template <class Real = double>
Report<Real> report(int m) {
  const FPoly<Real> f = f_poly<Real>(m);
  const MinimumOfL<Real> min = infimum_L<Real>(m);
  Report<Real> r;
  r.m = m;
  r.q1 = yamabe_sphere<Real>(m);
  r.qhat0 = qhat0<Real>(m);
  r.a0 = f.a0;
  r.a1 = f.a1;
  r.a2 = f.a2;
  r.s_root = root_f<Real>(m);
  r.c_star = min.c_star;
  r.inf_L = min.value;
  r.c2 = c2_point<Real>(m);
  r.c3 = c3_point<Real>(m);
  r.closed_form = closed_form_bound<Real>(m);
  r.grid_fallback = min.grid_fallback;
  r.q1_rounded = round_tenth_guarded(
      double(r.q1), Rounding::NearestTenth,
      [m] { return yamabe_sphere<long double>(m); });
  r.inf_L_rounded = round_tenth_guarded(
      double(r.inf_L), Rounding::FloorTenth,
      [m] { return infimum_L<long double>(m).value; });
  return r;
}

/// One row of the codimension-3 table: the sphere constant rounded to the
/// nearest tenth and the threshold bound rounded down, each re-derived at
/// extended precision when it lands inside the guard window.
struct TableRow {
  int m;
  double q_sphere_raw;
  double inf_L_raw;
  double q_sphere_rounded;  // nearest 0.1
  double inf_L_rounded;     // floor 0.1
};

inline std::vector<TableRow> table3(int m_from, int m_to) {
  if (m_from < 7 || m_from > m_to || m_to > max_dimension)
    throw domain_error("table3: need 7 <= m_from <= m_to <= " +
                       std::to_string(max_dimension));
  std::vector<TableRow> rows;
  rows.reserve(static_cast<size_t>(m_to - m_from + 1));
  for (int m = m_from; m <= m_to; ++m) {
    TableRow row;
    row.m = m;
    row.q_sphere_raw = yamabe_sphere<double>(m);
    row.inf_L_raw = infimum_L<double>(m).value;
    row.q_sphere_rounded = round_tenth_guarded(
        row.q_sphere_raw, Rounding::NearestTenth,
        [m] { return yamabe_sphere<long double>(m); });
    row.inf_L_rounded = round_tenth_guarded(
        row.inf_L_raw, Rounding::FloorTenth,
        [m] { return infimum_L<long double>(m).value; });
    rows.push_back(row);
  }
  return rows;
}

}  // namespace yamabe::codim3

#endif
