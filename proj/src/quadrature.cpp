#include "binn/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <Eigen/Eigenvalues>

#include "binn/errors.hpp"

namespace binn {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

GaussRule gauss_rule(int n) {
    if (n < 1 || n > 64) throw ConfigError("gauss_rule: order must be in [1, 64]");
    GaussRule rule;
    rule.order = n;
    rule.points.resize(n);
    rule.weights.resize(n);
    // Newton iteration on P_n; roots are symmetric, solve the first half.
    int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double dz = -p1 / pp;
            z += dz;
            if (std::abs(dz) < 1e-16) break;
        }
        rule.points[i] = -z;
        rule.points[n - 1 - i] = z;
        rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return rule;
}

namespace {

// Recurrence coefficients of the orthogonal polynomials for the weight
// ln(1/x) on [0,1], via the modified Chebyshev algorithm with shifted
// Legendre modified moments (known in closed form). long double keeps the
// recursion accurate through order ~48.
void log_weight_recurrence(int n, std::vector<long double>& alpha, std::vector<long double>& beta) {
    int nm = 2 * n;
    std::vector<long double> mom(nm);
    mom[0] = 1.0L;
    long double ratio = 1.0L; // (j!)^2 / (2j)!
    for (int j = 1; j < nm; ++j) {
        ratio *= static_cast<long double>(j) / (2.0L * j - 1.0L) * static_cast<long double>(j) / (2.0L * j);
        long double sign = (j % 2 == 0) ? 1.0L : -1.0L;
        mom[j] = sign / (static_cast<long double>(j) * (j + 1.0L)) * ratio;
    }
    // Monic shifted-Legendre recurrence: a_j = 1/2, b_j = j^2 / (4(4j^2-1)).
    auto leg_b = [](int j) {
        long double jj = j;
        return jj * jj / (4.0L * (4.0L * jj * jj - 1.0L));
    };

    alpha.assign(n, 0.0L);
    beta.assign(n, 0.0L);
    std::vector<long double> sk(nm, 0.0L), skm1(nm, 0.0L), tmp(nm, 0.0L);
    for (int l = 0; l < nm; ++l) sk[l] = mom[l];
    alpha[0] = 0.5L + mom[1] / mom[0];
    beta[0] = mom[0];
    for (int k = 1; k < n; ++k) {
        for (int l = k; l < nm - k; ++l) {
            tmp[l] = sk[l + 1] - (alpha[k - 1] - 0.5L) * sk[l] - beta[k - 1] * skm1[l] +
                     leg_b(l) * sk[l - 1];
        }
        alpha[k] = 0.5L + tmp[k + 1] / tmp[k] - sk[k] / sk[k - 1];
        beta[k] = tmp[k] / sk[k - 1];
        for (int l = k; l < nm - k; ++l) {
            skm1[l] = sk[l];
            sk[l] = tmp[l];
        }
    }
}

GaussRule make_log_rule(int n) {
    std::vector<long double> alpha, beta;
    log_weight_recurrence(n, alpha, beta);
    // Golub-Welsch on the symmetric Jacobi matrix.
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        J(i, i) = static_cast<double>(alpha[i]);
        if (i + 1 < n) {
            double b = static_cast<double>(std::sqrt(beta[i + 1]));
            J(i, i + 1) = b;
            J(i + 1, i) = b;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    GaussRule rule;
    rule.order = n;
    rule.points = es.eigenvalues();
    rule.weights.resize(n);
    double b0 = static_cast<double>(beta[0]); // total mass, = 1 for ln(1/x) on [0,1]
    for (int i = 0; i < n; ++i) {
        double v0 = es.eigenvectors()(0, i);
        rule.weights[i] = b0 * v0 * v0;
    }
    return rule;
}

} // namespace

GaussRule gauss_log_rule(int n) {
    if (n < 1 || n > 48) throw ConfigError("gauss_log_rule: order must be in [1, 48]");
    static std::map<int, GaussRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_log_rule(n)).first;
    return it->second;
}

namespace {

KernelBlock eval_kernel(KernelKind kind, Vec2 P, const ElementFrame& f, const Material& mat) {
    return kind == KernelKind::U ? kelvin_U(P, f.position, mat)
                                 : kelvin_T(P, f.position, f.normal, mat);
}

// Plain Gauss over the local sub-interval [a, b].
Block2x6 gauss_on_interval(Vec2 P, const BoundaryElement& element, KernelKind kind,
                           const GaussRule& rule, const Material& mat,
                           double alpha1, double alpha3, double a, double b) {
    Block2x6 out = Block2x6::Zero();
    double half = 0.5 * (b - a);
    double mid = 0.5 * (a + b);
    for (int g = 0; g < rule.order; ++g) {
        double xi = mid + half * rule.points[g];
        ElementFrame f = geometry_at(element, xi);
        KernelBlock K = eval_kernel(kind, P, f, mat);
        auto N = shape_phys(xi, alpha1, alpha3);
        double w = rule.weights[g] * half * f.jacobian;
        for (int k = 0; k < 3; ++k) {
            double wk = w * N[k];
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) out(i, 2 * k + j) += wk * K[i][j];
        }
    }
    return out;
}

void subdivide_integrate(Vec2 P, const BoundaryElement& element, KernelKind kind,
                         const GaussRule& rule, const Material& mat,
                         double alpha1, double alpha3, double a, double b, int depth,
                         Block2x6& acc) {
    Vec2 pa = geometry_at(element, a).position;
    Vec2 pm = geometry_at(element, 0.5 * (a + b)).position;
    Vec2 pb = geometry_at(element, b).position;
    double size = (pm - pa).norm() + (pb - pm).norm();
    double dist = std::min({(P - pa).norm(), (P - pm).norm(), (P - pb).norm()});
    if (dist >= size || depth <= 0) {
        acc += gauss_on_interval(P, element, kind, rule, mat, alpha1, alpha3, a, b);
        return;
    }
    double mid = 0.5 * (a + b);
    subdivide_integrate(P, element, kind, rule, mat, alpha1, alpha3, a, mid, depth - 1, acc);
    subdivide_integrate(P, element, kind, rule, mat, alpha1, alpha3, mid, b, depth - 1, acc);
}

} // namespace

Block2x6 integrate_regular(Vec2 P, const BoundaryElement& element, KernelKind kernel,
                           const GaussRule& rule, const Material& mat,
                           double alpha1, double alpha3, int max_depth) {
    Block2x6 out = Block2x6::Zero();
    subdivide_integrate(P, element, kernel, rule, mat, alpha1, alpha3, -1.0, 1.0, max_depth, out);
    return out;
}

Block2x6 integrate_weak_singular(const BoundaryElement& element, double xi_s,
                                 const GaussRule& rule, const GaussRule& log_rule,
                                 const Material& mat, double alpha1, double alpha3) {
    Vec2 P = geometry_at(element, xi_s).position;
    double nu = mat.kernel_nu();
    double mu = mat.shear_modulus();
    double A = 1.0 / (8.0 * kPi * mu * (1.0 - nu));
    double len = element.length > 0.0 ? element.length : element_arc_length(element);
    double s0 = 0.5 * len; // log-split scale

    Block2x6 out = Block2x6::Zero();
    // Each half is mapped to u in [0,1] with u = 0 at the singular point:
    //   integral = c * Gauss_u[ S(xi(u)) + B(xi(u)) ln(c*s0) ] - c * LogGauss_u[ B(xi(u)) ]
    // where S carries ln(r/(|xi-xi_s| s0)) (smooth) and B is the coefficient
    // of ln|xi - xi_s| in the integrand.
    for (int side = 0; side < 2; ++side) {
        double c = (side == 0) ? (xi_s + 1.0) : (1.0 - xi_s);
        double dir = (side == 0) ? -1.0 : 1.0;
        for (int g = 0; g < rule.order; ++g) {
            double u = 0.5 * (1.0 + rule.points[g]); // Gauss on [0,1]
            double w = 0.5 * rule.weights[g] * c;
            double xi = xi_s + dir * c * u;
            ElementFrame f = geometry_at(element, xi);
            auto N = shape_phys(xi, alpha1, alpha3);
            double r = (f.position - P).norm();
            double smooth_log = std::log(r / (c * u * s0));
            Vec2 rn = (f.position - P) / r;
            double rr[2] = {rn.x, rn.y};
            for (int k = 0; k < 3; ++k) {
                double base = w * N[k] * f.jacobian * A;
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) {
                        double dij = (i == j) ? 1.0 : 0.0;
                        double val = (4.0 * nu - 3.0) * (smooth_log + std::log(c * s0)) * dij +
                                     rr[i] * rr[j];
                        out(i, 2 * k + j) += base * val;
                    }
            }
        }
        for (int g = 0; g < log_rule.order; ++g) {
            double u = log_rule.points[g];
            double w = log_rule.weights[g] * c; // LogGauss[B] carries ln(1/u); subtract it
            double xi = xi_s + dir * c * u;
            ElementFrame f = geometry_at(element, xi);
            auto N = shape_phys(xi, alpha1, alpha3);
            for (int k = 0; k < 3; ++k) {
                double base = w * N[k] * f.jacobian * A * (4.0 * nu - 3.0);
                for (int i = 0; i < 2; ++i) out(i, 2 * k + i) -= base;
            }
        }
    }
    return out;
}

Block2x6 integrate_strong_singular(const BoundaryElement& element, double xi_s,
                                   const GaussRule& rule, const Material& mat,
                                   double alpha1, double alpha3) {
    double nu = mat.kernel_nu();
    double one_m_2nu = 1.0 - 2.0 * nu;
    double K = -one_m_2nu / (4.0 * kPi * (1.0 - nu));

    // Quadratic geometry: x(xi) = x(xi_s) + d*xp + d^2/2*xpp, d = xi - xi_s.
    auto dn = shape_geom_deriv(xi_s);
    Vec2 xp, xpp;
    for (int k = 0; k < 3; ++k) xp += dn[k] * element.geom_nodes[k];
    xpp = element.geom_nodes[0] - 2.0 * element.geom_nodes[1] + element.geom_nodes[2];
    double cross = xp.cross(xpp);
    double dot_p_pp = xp.dot(xpp);
    double xpp2 = xpp.squared_norm();

    auto Ns = shape_phys(xi_s, alpha1, alpha3);
    auto dNs = shape_phys_deriv(xi_s, alpha1, alpha3);
    // Leading quadratic coefficients of the shape functions.
    double a2[3] = {1.0 / (alpha1 * (alpha1 - alpha3)), 1.0 / (alpha1 * alpha3),
                    1.0 / (alpha3 * (alpha3 - alpha1))};

    Block2x6 out = Block2x6::Zero();
    for (int side = 0; side < 2; ++side) {
        double lo = (side == 0) ? -1.0 : xi_s;
        double hi = (side == 0) ? xi_s : 1.0;
        double half = 0.5 * (hi - lo);
        double mid = 0.5 * (lo + hi);
        for (int g = 0; g < rule.order; ++g) {
            double xi = mid + half * rule.points[g];
            double w = rule.weights[g] * half;
            double d = xi - xi_s;
            Vec2 rv = d * (xp + (0.5 * d) * xpp); // Q - P
            double den = (xp + (0.5 * d) * xpp).squared_norm();
            double rnum = rv.squared_norm();
            double rhat[2] = {rv.x / std::sqrt(rnum), rv.y / std::sqrt(rnum)};
            auto N = shape_phys(xi, alpha1, alpha3);
            // dr/dn branch (smooth): T_sym N_k J =
            //   -cross [ (1-2nu) d_ij + 2 r_i r_j ] N_k / (8 pi (1-nu) den)
            double csym = -cross / (8.0 * kPi * (1.0 - nu) * den);
            // Antisymmetric branch minus its pole, combined analytically:
            //   K eps_ij [ N_k(xi) ((1/2) xp.xpp + (d/4)|xpp|^2)/den + N_k'(xi_s) + a2_k d ]
            double hh = (0.5 * dot_p_pp + 0.25 * d * xpp2) / den;
            for (int k = 0; k < 3; ++k) {
                double anti = K * (N[k] * hh + dNs[k] + a2[k] * d);
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) {
                        double dij = (i == j) ? 1.0 : 0.0;
                        double eps = (i == j) ? 0.0 : (i == 0 ? 1.0 : -1.0);
                        out(i, 2 * k + j) +=
                            w * (csym * (one_m_2nu * dij + 2.0 * rhat[i] * rhat[j]) * N[k] +
                                 eps * anti);
                    }
            }
        }
    }
    // CPV of the subtracted c/(xi - xi_s) term.
    double cpv = std::log((1.0 - xi_s) / (1.0 + xi_s));
    for (int k = 0; k < 3; ++k) {
        double c = K * Ns[k] * cpv;
        out(0, 2 * k + 1) += c;
        out(1, 2 * k + 0) -= c;
    }
    return out;
}

} // namespace binn
