#include "binn/kernels.hpp"

#include <cmath>

#include "binn/errors.hpp"

namespace binn {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

KernelBlock kelvin_U(Vec2 P, Vec2 Q, const Material& mat) {
    Vec2 d = Q - P;
    double r = d.norm();
    if (r == 0.0) throw NumericsError("kelvin_U: evaluation at r = 0");
    double nu = mat.kernel_nu();
    double mu = mat.shear_modulus();
    double c = 1.0 / (8.0 * kPi * mu * (1.0 - nu));
    double lnr = std::log(r);
    double rx = d.x / r, ry = d.y / r;
    KernelBlock U;
    U[0][0] = c * ((4.0 * nu - 3.0) * lnr + rx * rx);
    U[0][1] = c * (rx * ry);
    U[1][0] = U[0][1];
    U[1][1] = c * ((4.0 * nu - 3.0) * lnr + ry * ry);
    return U;
}

KernelBlock kelvin_T(Vec2 P, Vec2 Q, Vec2 n, const Material& mat) {
    Vec2 d = Q - P;
    double r = d.norm();
    if (r == 0.0) throw NumericsError("kelvin_T: evaluation at r = 0");
    double nu = mat.kernel_nu();
    double c = -1.0 / (4.0 * kPi * (1.0 - nu) * r);
    double rr[2] = {d.x / r, d.y / r};
    double nn[2] = {n.x, n.y};
    double drdn = rr[0] * nn[0] + rr[1] * nn[1];
    double one_m_2nu = 1.0 - 2.0 * nu;
    KernelBlock T;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double dij = (i == j) ? 1.0 : 0.0;
            T[i][j] = c * (drdn * (one_m_2nu * dij + 2.0 * rr[i] * rr[j]) -
                           one_m_2nu * (rr[i] * nn[j] - rr[j] * nn[i]));
        }
    return T;
}

Tensor2 stress_from_gradient(const Tensor2& grad_u, const Material& mat) {
    double mu = mat.shear_modulus();
    double lambda = mat.lame_lambda();
    double tr = grad_u[0][0] + grad_u[1][1];
    Tensor2 sigma;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double eps = 0.5 * (grad_u[i][j] + grad_u[j][i]);
            sigma[i][j] = 2.0 * mu * eps + (i == j ? lambda * tr : 0.0);
        }
    return sigma;
}

Vec2 traction(const Tensor2& sigma, Vec2 n) {
    return {sigma[0][0] * n.x + sigma[0][1] * n.y,
            sigma[1][0] * n.x + sigma[1][1] * n.y};
}

} // namespace binn
