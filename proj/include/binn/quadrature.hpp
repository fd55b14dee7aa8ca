#pragma once

#include <Eigen/Dense>

#include "binn/kernels.hpp"
#include "binn/mesh.hpp"

namespace binn {

// Abscissae/weights of an n-point rule. gauss_rule: Gauss-Legendre on [-1,1].
// gauss_log_rule: Gauss rule for the weight ln(1/x) on [0,1], i.e.
// integral_0^1 f(x) ln(1/x) dx ~ sum w_i f(x_i).
struct GaussRule {
    Eigen::VectorXd points;
    Eigen::VectorXd weights;
    int order = 0;
};

GaussRule gauss_rule(int n);
GaussRule gauss_log_rule(int n);

enum class KernelKind { U, T };

// 2x6 element block: rows = collocation direction at P, columns = (node k,
// direction j) with column index 2k + j. Entry (i, 2k+j) approximates
// integral over the element of K_ij(P, Q(xi)) N_kP(xi) J(xi) dxi.
using Block2x6 = Eigen::Matrix<double, 2, 6>;

// Non-singular case (P off the element). Nearly singular integrals are
// handled by recursive bisection of the local interval until the distance
// from P to a sub-element exceeds the sub-element length (depth-capped).
Block2x6 integrate_regular(Vec2 P, const BoundaryElement& element, KernelKind kernel,
                           const GaussRule& rule, const Material& mat,
                           double alpha1, double alpha3, int max_depth = 8);

// Weakly singular U-integrals with P at local coordinate xi_s of the element
// itself. The element is split at xi_s; the ln(r) factor is split into a
// smooth part and ln|xi - xi_s|, which is integrated with the log-weighted
// rule. log_rule must be a gauss_log_rule of any order.
Block2x6 integrate_weak_singular(const BoundaryElement& element, double xi_s,
                                 const GaussRule& rule, const GaussRule& log_rule,
                                 const Material& mat, double alpha1, double alpha3);

// Strongly singular T-integrals in the CPV sense, P at local coordinate xi_s
// of the element itself. Singularity subtraction: the 1/(xi - xi_s) part of
// the integrand is removed analytically using the local expansion of the
// quadratic geometry at xi_s and its CPV value ln((1-xi_s)/(1+xi_s)) is added
// back; the regularized remainder is integrated by Gauss on the two halves.
Block2x6 integrate_strong_singular(const BoundaryElement& element, double xi_s,
                                   const GaussRule& rule, const Material& mat,
                                   double alpha1, double alpha3);

} // namespace binn
