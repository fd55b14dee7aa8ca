#include "binn/postprocess.hpp"

#include <algorithm>
#include <cmath>

#include "binn/errors.hpp"

namespace binn {

Vec2 interior_displacement(Vec2 P, const BoundaryMesh& mesh, const BoundaryState& state,
                           const Material& mat, const QuadratureConfig& config) {
    if (!point_inside(mesh, P))
        throw DomainError("interior_displacement: point is outside the domain or on the boundary");
    const GaussRule rule = gauss_rule(config.order);
    Eigen::Vector2d u = Eigen::Vector2d::Zero();
    for (int e = 0; e < mesh.element_count(); ++e) {
        Block2x6 Ublk = integrate_regular(P, mesh.elements[e], KernelKind::U, rule, mat,
                                          mesh.alpha1, mesh.alpha3, config.max_subdivision_depth);
        Block2x6 Tblk = integrate_regular(P, mesh.elements[e], KernelKind::T, rule, mat,
                                          mesh.alpha1, mesh.alpha3, config.max_subdivision_depth);
        auto nodes = mesh.element_nodes(e);
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 2; ++j) {
                int dof = 2 * nodes[k] + j;
                u += Ublk.col(2 * k + j) * state.t[dof] - Tblk.col(2 * k + j) * state.u[dof];
            }
    }
    return {u[0], u[1]};
}

InteriorStress interior_stress(Vec2 P, const BoundaryMesh& mesh, const BoundaryState& state,
                               const Material& mat, const QuadratureConfig& config, double h_fd) {
    if (h_fd <= 0.0) h_fd = 1e-5 * mesh.diameter();
    InteriorStress out;
    out.clearance_ok = distance_to_boundary(mesh, P) >= 10.0 * h_fd;

    Vec2 uxp = interior_displacement({P.x + h_fd, P.y}, mesh, state, mat, config);
    Vec2 uxm = interior_displacement({P.x - h_fd, P.y}, mesh, state, mat, config);
    Vec2 uyp = interior_displacement({P.x, P.y + h_fd}, mesh, state, mat, config);
    Vec2 uym = interior_displacement({P.x, P.y - h_fd}, mesh, state, mat, config);

    Tensor2 grad;
    grad[0][0] = (uxp.x - uxm.x) / (2.0 * h_fd);
    grad[1][0] = (uxp.y - uxm.y) / (2.0 * h_fd);
    grad[0][1] = (uyp.x - uym.x) / (2.0 * h_fd);
    grad[1][1] = (uyp.y - uym.y) / (2.0 * h_fd);
    Tensor2 sigma = stress_from_gradient(grad, mat);
    out.s11 = sigma[0][0];
    out.s22 = sigma[1][1];
    out.s12 = sigma[0][1];
    return out;
}

std::vector<double> relative_error(const std::vector<double>& u_num,
                                   const std::vector<double>& u_exact) {
    if (u_num.size() != u_exact.size())
        throw ConfigError("relative_error: sample sets differ in size");
    double scale = 0.0;
    for (double v : u_exact) scale = std::max(scale, std::abs(v));
    if (scale == 0.0)
        throw ConfigError("relative_error: exact field is identically zero (undefined normalization)");
    std::vector<double> err(u_num.size());
    for (size_t i = 0; i < u_num.size(); ++i) err[i] = std::abs(u_num[i] - u_exact[i]) / scale;
    return err;
}

BendingSolution benchmark_exact(Vec2 p, const Material& mat) {
    if (mat.mode != ElasticMode::PlaneStrain)
        throw ConfigError("benchmark_exact: the bending benchmark is plane strain");
    double Eprime = mat.E / (1.0 - mat.nu * mat.nu);
    double nuprime = mat.nu / (1.0 - mat.nu);
    BendingSolution s;
    s.u1 = 1000.0 / Eprime * p.x * p.y;
    s.u2 = -1000.0 / (2.0 * Eprime) * (p.x * p.x + nuprime * p.y * p.y);
    s.s11 = 1000.0 * p.y;
    return s;
}

FieldGrid evaluate_field_grid(const BoundaryMesh& mesh, const BoundaryState& state,
                              const Material& mat, int nx, int ny, double clearance_fraction,
                              const QuadratureConfig& config) {
    if (nx < 1 || ny < 1) throw ConfigError("evaluate_field_grid: grid must be at least 1x1");
    FieldGrid grid;
    grid.nx = nx;
    grid.ny = ny;
    Vec2 lo = mesh.bbox_min(), hi = mesh.bbox_max();
    double clearance = clearance_fraction * mesh.diameter();
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            FieldSample s;
            s.p.x = nx == 1 ? 0.5 * (lo.x + hi.x) : lo.x + (hi.x - lo.x) * ix / (nx - 1.0);
            s.p.y = ny == 1 ? 0.5 * (lo.y + hi.y) : lo.y + (hi.y - lo.y) * iy / (ny - 1.0);
            s.inside = point_inside(mesh, s.p) && distance_to_boundary(mesh, s.p) >= clearance;
            if (s.inside) {
                Vec2 u = interior_displacement(s.p, mesh, state, mat, config);
                s.u1 = u.x;
                s.u2 = u.y;
                InteriorStress st = interior_stress(s.p, mesh, state, mat, config);
                s.s11 = st.s11;
                s.s22 = st.s22;
                s.s12 = st.s12;
            }
            grid.samples.push_back(s);
        }
    }
    return grid;
}

} // namespace binn
