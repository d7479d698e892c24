#ifndef YAMABE_MODEL_SPACE_HPP
#define YAMABE_MODEL_SPACE_HPP

#include <cmath>
#include <string>

#include "yamabe/constants.hpp"
#include "yamabe/errors.hpp"
#include "yamabe/quadrature.hpp"
#include "yamabe/special.hpp"

namespace yamabe {

/// Parameters (m, k, c) of the model space H_c^{k+1} x S^{m-k-1}: a product
/// of a rescaled hyperbolic space (Euclidean for c = 0) and a round sphere.
///
/// At c = 1 the space is conformal to the complement of a k-sphere inside
/// the round S^m, which pins several of its invariants to the sphere
/// values. That conformal picture enters this module as documentation
/// only; no numeric output here depends on the conformal factor itself.
struct ModelSpaceParams {
  int m;     // total dimension, >= 2
  int k;     // 0 <= k <= m-1
  double c;  // hyperbolic rescaling in [0, 1]
};

inline void validate(const ModelSpaceParams& p) {
  if (p.m < 2) throw domain_error("ModelSpaceParams: m must be >= 2");
  if (p.k < 0 || p.k > p.m - 1)
    throw domain_error("ModelSpaceParams: k must satisfy 0 <= k <= m-1");
  if (!(p.c >= 0.0 && p.c <= 1.0))
    throw domain_error("ModelSpaceParams: c must lie in [0, 1]");
}

/// A geodesic ball of radius r in the round m-sphere.
struct CapParams {
  int m;
  double r;  // radius in (0, pi]
};

inline void validate(const CapParams& p) {
  if (p.m < 2) throw domain_error("CapParams: m must be >= 2");
  if (!(p.r > 0.0 && p.r <= pi_v<double>))
    throw domain_error("CapParams: radius must lie in (0, pi]");
}

/// Warped radial coordinate of the rescaled hyperbolic metric:
/// sinh(c r)/c for c != 0, with the Euclidean limit r at c = 0.
template <class Real = double>
Real sinh_c(Real c, Real r) {
  if (!(c >= Real(0) && c <= Real(1)))
    throw domain_error("sinh_c: c must lie in [0, 1]");
  if (!(r >= Real(0))) throw domain_error("sinh_c: r must be >= 0");
  if (c == Real(0)) return r;
  return std::sinh(c * r) / c;
}

/// Scalar curvature of the product metric: -c^2 k(k+1) from the hyperbolic
/// factor plus (m-k-1)(m-k-2) from the sphere factor.
template <class Real = double>
Real scalar_curvature(const ModelSpaceParams& p) {
  validate(p);
  const Real hyp = -Real(p.c) * Real(p.c) * Real(p.k) * Real(p.k + 1);
  const Real sph = Real(p.m - p.k - 1) * Real(p.m - p.k - 2);
  return hyp + sph;
}

/// Sufficient criterion for the Dirac operator on the model space to be
/// invertible on L^s: (m-k-1)/2 > c k |1/s - 1/2|. Pass s = infinity for
/// the L^inf endpoint (|1/s - 1/2| = 1/2). A `false` return makes no claim
/// of non-invertibility; the criterion only goes one way.
inline bool ls_invertible(const ModelSpaceParams& p, double s) {
  validate(p);
  if (!(s >= 1.0))  // rejects NaN as well; +inf passes
    throw domain_error("ls_invertible: s must lie in [1, inf]");
  const double deviation = std::abs(1.0 / s - 0.5);
  return (p.m - p.k - 1) / 2.0 > p.c * p.k * deviation;
}

/// Codimension condition (m-2)(m-k-1) > ck. Fails exactly for k = m-2 with
/// c = 1 among the admissible ranges. The equivalent form
/// (m-1)(m-k-2) > -(1-c)k is evaluated alongside; disagreement would mean a
/// broken build, not a domain error.
inline bool codim_condition(const ModelSpaceParams& p) {
  validate(p);
  const bool direct = double(p.m - 2) * double(p.m - p.k - 1) > p.c * p.k;
  const bool equivalent =
      double(p.m - 1) * double(p.m - p.k - 2) > -(1.0 - p.c) * p.k;
  if (direct != equivalent)
    throw internal_check_error(
        "codim_condition: the two algebraic formulations disagree at m=" +
        std::to_string(p.m) + " k=" + std::to_string(p.k));
  return direct;
}

/// Which decay integral a convergence question refers to:
/// spinor solutions decay like cosh^{1-m} sinh^k, functions like
/// cosh^{2-m} sinh^k.
enum class DecayCase { Spinor, Function };

/// Whether the L^2 decay integral of the c = 1 model solution converges:
/// spinor case iff k <= m-2, function case iff k <= m-3.
inline bool decay_convergent(int m, int k, DecayCase kind) {
  if (k < 0 || k > m - 1)
    throw domain_error("decay_convergent: need 0 <= k <= m-1");
  const int exponent = (kind == DecayCase::Spinor ? 1 : 2) - m + k;
  return exponent < 0;
}

/// Diagnostic companion to decay_convergent: the truncated integral
/// int_0^T cosh^e t sinh^k t dt with e = 1-m+k (spinor) or 2-m+k (function).
template <class Real = double>
Real decay_integral(int m, int k, DecayCase kind, Real T,
                    Real tol = Real(1e-10)) {
  if (k < 0 || k > m - 1)
    throw domain_error("decay_integral: need 0 <= k <= m-1");
  if (!(T >= Real(0))) throw domain_error("decay_integral: T must be >= 0");
  const Real e = Real((kind == DecayCase::Spinor ? 1 : 2) - m);
  return integrate<Real>(
      [&](Real t) {
        return std::pow(std::cosh(t), e) * std::pow(std::sinh(t), Real(k));
      },
      Real(0), T, tol);
}

/// Volume of the geodesic cap of radius r in S^m:
/// vol(S^{m-1}) int_0^r sin^{m-1} theta dtheta, by adaptive quadrature.
template <class Real = double>
Real cap_volume(int m, Real r, Real tol = Real(1e-12)) {
  if (m < 2) throw domain_error("cap_volume: dimension must be >= 2");
  if (!(r > Real(0) && r <= pi_v<Real>))
    throw domain_error("cap_volume: radius must lie in (0, pi]");
  const Real shell = sphere_volume<Real>(m - 1);
  return shell * integrate<Real>(
                     [&](Real t) { return std::pow(std::sin(t), Real(m - 1)); },
                     Real(0), r, tol);
}

/// Eigenvalue of the spherical-cap solution transported to hyperbolic
/// space: lambda_r = (m/2) vol(B_r)^{1/m}. The exponent 1/m = (q-2)/q is
/// forced by the normalization |phi| = vol(B_r)^{-1/q}; at r = pi the
/// renormalized value must reproduce Q*(S^m).
template <class Real = double>
Real spherical_cap_lambda(const CapParams& p) {
  validate(p);
  if (p.m < 3)
    throw domain_error("spherical_cap_lambda: dimension must be >= 3");
  return Real(p.m) / Real(2) *
         std::pow(cap_volume<Real>(p.m, Real(p.r)), Real(1) / Real(p.m));
}

/// Q* of the codimension-2 model space: c^{2/m} Q*(S^m). Its infimum over
/// c in [0, 1] vanishes, which is why no positive codimension-2 threshold
/// exists on the function side.
template <class Real = double>
Real q_star_mm2(int m, Real c) {
  if (m < 3) throw domain_error("q_star_mm2: dimension must be >= 3");
  if (!(c >= Real(0) && c <= Real(1)))
    throw domain_error("q_star_mm2: c must lie in [0, 1]");
  return std::pow(c, Real(2) / Real(m)) * yamabe_sphere<Real>(m);
}

}  // namespace yamabe

#endif
