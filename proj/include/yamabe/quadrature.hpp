#ifndef YAMABE_QUADRATURE_HPP
#define YAMABE_QUADRATURE_HPP

#include <cmath>

#include "yamabe/errors.hpp"

namespace yamabe {

/// Compensated accumulator (Kahan-Babuska-Neumaier): the running
/// compensation keeps terms that the naive sum swallows entirely.
template <class Real = double>
class CompensatedSum {
 public:
  void add(Real x) {
    const Real t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }
  Real value() const { return sum_ + carry_; }

 private:
  Real sum_ = 0;
  Real carry_ = 0;
};

namespace detail {

template <class Real>
Real simpson_step(Real a, Real b, Real fa, Real fm, Real fb) {
  return (b - a) / Real(6) * (fa + Real(4) * fm + fb);
}

template <class Real, class F>
Real adaptive_simpson_rec(F&& f, Real a, Real b, Real fa, Real fm, Real fb,
                          Real whole, Real tol, int depth) {
  if (depth > 60)
    throw convergence_error("adaptive_simpson: recursion depth exceeded");
  const Real m = (a + b) / Real(2);
  const Real lm = (a + m) / Real(2);
  const Real rm = (m + b) / Real(2);
  const Real flm = f(lm);
  const Real frm = f(rm);
  const Real left = simpson_step(a, m, fa, flm, fm);
  const Real right = simpson_step(m, b, fm, frm, fb);
  const Real delta = left + right - whole;
  if (std::abs(delta) <= Real(15) * tol)
    return left + right + delta / Real(15);
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / Real(2),
                              depth + 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / Real(2),
                              depth + 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature on [a, b] to absolute tolerance `tol`.
template <class Real = double, class F>
Real integrate(F&& f, Real a, Real b, Real tol = Real(1e-12)) {
  if (a == b) return Real(0);
  const Real fa = f(a);
  const Real fb = f(b);
  const Real fm = f((a + b) / Real(2));
  const Real whole = detail::simpson_step(a, b, fa, fm, fb);
  return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 0);
}

}  // namespace yamabe

#endif
