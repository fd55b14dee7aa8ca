#include "binn/influence.hpp"

#include "binn/errors.hpp"

namespace binn {

InfluenceMatrices assemble(const BoundaryMesh& mesh, const Material& mat,
                           const QuadratureConfig& config) {
    if (mesh.element_count() == 0) throw GeometryError("assemble: empty mesh");
    const int n_nodes = mesh.node_count();
    const int dim = 2 * n_nodes;
    const GaussRule rule = gauss_rule(config.order);
    const GaussRule log_rule = gauss_log_rule(config.order);
    const double a1 = mesh.alpha1, a3 = mesh.alpha3;

    InfluenceMatrices out;
    out.n_nodes = n_nodes;
    out.config = config;
    out.Hhat = Eigen::MatrixXd::Zero(dim, dim);
    out.G = Eigen::MatrixXd::Zero(dim, dim);

    for (int m = 0; m < n_nodes; ++m) {
        const CollocationNode& node = mesh.nodes[m];
        const Vec2 P = node.position;
        for (int e = 0; e < mesh.element_count(); ++e) {
            const BoundaryElement& el = mesh.elements[e];
            Block2x6 Hblk, Gblk;
            if (e == node.element) {
                Gblk = integrate_weak_singular(el, node.xi, rule, log_rule, mat, a1, a3);
                Hblk = integrate_strong_singular(el, node.xi, rule, mat, a1, a3);
            } else {
                Gblk = integrate_regular(P, el, KernelKind::U, rule, mat, a1, a3,
                                         config.max_subdivision_depth);
                Hblk = integrate_regular(P, el, KernelKind::T, rule, mat, a1, a3,
                                         config.max_subdivision_depth);
            }
            out.Hhat.block<2, 6>(2 * m, 6 * e) += Hblk;
            out.G.block<2, 6>(2 * m, 6 * e) += Gblk;
        }
        // Jump term C = I/2: every collocation node sits at a smooth boundary
        // point by the discontinuous-element layout.
        out.Hhat(2 * m, 2 * m) += 0.5;
        out.Hhat(2 * m + 1, 2 * m + 1) += 0.5;
    }

    if (config.t_path == SingularTPath::RigidBody) rigid_body_diagonal(out.Hhat);
    return out;
}

void rigid_body_diagonal(Eigen::MatrixXd& Hhat) {
    const int dim = static_cast<int>(Hhat.rows());
    if (dim % 2 != 0 || Hhat.cols() != dim)
        throw ConfigError("rigid_body_diagonal: matrix must be square with even dimension");
    const int n = dim / 2;
    for (int m = 0; m < n; ++m) {
        Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
        for (int c = 0; c < n; ++c) {
            if (c == m) continue;
            acc += Hhat.block<2, 2>(2 * m, 2 * c);
        }
        Hhat.block<2, 2>(2 * m, 2 * m) = -acc;
    }
}

double matrix_inf_norm(const Eigen::MatrixXd& m) {
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

} // namespace binn
