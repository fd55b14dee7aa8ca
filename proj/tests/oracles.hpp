#pragma once

// Test-only reference implementations, independent of the production
// integration paths they check.

#include "binn/kernels.hpp"
#include "binn/mesh.hpp"
#include "binn/quadrature.hpp"

namespace binn::oracle {

// Brute-force integral of K(P, Q(xi)) N_k(xi) J(xi) over [a, b] by adaptive
// bisection (Gauss panels, self-difference below tol). P must be off the
// element.
Block2x6 adaptive_regular(Vec2 P, const BoundaryElement& element, KernelKind kind,
                          const Material& mat, double alpha1, double alpha3, double a = -1.0,
                          double b = 1.0, double tol = 1e-13);

// Weakly singular U self-integral by geometric panel refinement towards the
// singular point (resolves the ln|xi - xi_s| endpoint singularity to ~1e-13).
Block2x6 adaptive_weak_singular(const BoundaryElement& element, double xi_s, const Material& mat,
                                double alpha1, double alpha3);

// CPV T self-integral: symmetric epsilon-exclusion with geometric panels,
// Richardson-extrapolated in epsilon (odd-power expansion).
Block2x6 adaptive_strong_singular(const BoundaryElement& element, double xi_s, const Material& mat,
                                  double alpha1, double alpha3);

// Plane-strain Kolosov-Muskhelishvili solution with phi(z) = e^z, psi = 0:
// a transcendental exact Navier field used for convergence studies.
struct ExactField {
    Vec2 u;
    Tensor2 sigma;
};
ExactField kolosov_exp(Vec2 p, const Material& mat);

} // namespace binn::oracle
