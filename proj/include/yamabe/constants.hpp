#ifndef YAMABE_CONSTANTS_HPP
#define YAMABE_CONSTANTS_HPP

#include <cmath>

#include "yamabe/errors.hpp"
#include "yamabe/special.hpp"

namespace yamabe {

/// Per-dimension record of the closed-form geometric constants:
/// the sphere volume, the conformal Yamabe constant of the sphere, the
/// conformal-Laplacian coefficient a = 4(m-1)/(m-2) and the four critical
/// exponents p, p*, q, q*.
template <class Real = double>
struct SphereConstants {
  int m;
  Real vol;     // vol(S^m)
  Real q_star;  // Q*(S^m) = m(m-1) vol(S^m)^{2/m}
  Real a;       // 4(m-1)/(m-2)
  Real p;       // 2m/(m-2)
  Real p_star;  // 2m/(m+2)
  Real q;       // 2m/(m-1)
  Real q_conj;  // q* = 2m/(m+1)
};

/// Conformal Yamabe constant of the round m-sphere, m(m-1) vol(S^m)^{2/m}.
/// The universal upper bound for Q* over all m-manifolds.
template <class Real = double>
Real yamabe_sphere(int m) {
  if (m < 3) throw domain_error("yamabe_sphere: dimension must be >= 3");
  return Real(m) * Real(m - 1) *
         std::pow(sphere_volume<Real>(m), Real(2) / Real(m));
}

/// Renormalization 4 (m-1)/m lambda^2 turning a minimal nonlinear Dirac
/// eigenvalue into a quantity on the Yamabe scale; the normalization makes
/// the spin constant of the sphere equal Q*(S^m).
template <class Real = double>
Real spin_renormalize(int m, Real lambda) {
  if (m < 3) throw domain_error("spin_renormalize: dimension must be >= 3");
  if (!(lambda >= Real(0)))
    throw domain_error("spin_renormalize: eigenvalue must be >= 0");
  return Real(4) * Real(m - 1) / Real(m) * lambda * lambda;
}

template <class Real = double>
SphereConstants<Real> sphere_constants(int m) {
  if (m < 3) throw domain_error("sphere_constants: dimension must be >= 3");
  SphereConstants<Real> sc;
  sc.m = m;
  sc.vol = sphere_volume<Real>(m);
  sc.q_star = yamabe_sphere<Real>(m);
  sc.a = Real(4) * Real(m - 1) / Real(m - 2);
  sc.p = Real(2) * Real(m) / Real(m - 2);
  sc.p_star = Real(2) * Real(m) / Real(m + 2);
  sc.q = Real(2) * Real(m) / Real(m - 1);
  sc.q_conj = Real(2) * Real(m) / Real(m + 1);
  return sc;
}

}  // namespace yamabe

#endif
