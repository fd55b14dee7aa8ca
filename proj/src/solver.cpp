#include "binn/solver.hpp"

#include <chrono>
#include <cmath>

#include "binn/errors.hpp"

namespace binn {

BoundaryConditions bind_bcs(const BoundaryMesh& mesh, const std::vector<SegmentBC>& segment_bcs,
                            const std::vector<PointConstraint>& points) {
    const int dofs = 2 * mesh.node_count();
    BoundaryConditions bcs;
    bcs.kind.assign(dofs, BCKind::Neumann);
    bcs.value = Eigen::VectorXd::Zero(dofs);

    std::map<std::string, const SegmentBC*> by_segment;
    for (const auto& sb : segment_bcs) {
        if (mesh.segment_elements.find(sb.segment) == mesh.segment_elements.end())
            throw SpecError("bind_bcs: boundary condition references unknown segment '" +
                            sb.segment + "'");
        if (!by_segment.emplace(sb.segment, &sb).second)
            throw SpecError("bind_bcs: segment '" + sb.segment + "' specified twice");
    }
    for (const auto& [id, elems] : mesh.segment_elements) {
        auto it = by_segment.find(id);
        if (it == by_segment.end())
            throw SpecError("bind_bcs: no boundary condition for segment '" + id + "'");
        const SegmentBC& sb = *it->second;
        for (int e : elems) {
            for (int n : mesh.element_nodes(e)) {
                Vec2 p = mesh.nodes[n].position;
                bcs.kind[2 * n] = sb.kind1;
                bcs.value[2 * n] = sb.value1.eval(p);
                bcs.kind[2 * n + 1] = sb.kind2;
                bcs.value[2 * n + 1] = sb.value2.eval(p);
            }
        }
    }
    for (const auto& pc : points) {
        if (pc.direction < 0 || pc.direction > 1)
            throw SpecError("bind_bcs: point constraint direction must be 0 or 1");
        int n = nearest_node_on_segment(mesh, pc.segment, pc.near);
        bcs.kind[2 * n + pc.direction] = pc.kind;
        bcs.value[2 * n + pc.direction] = pc.value.eval(mesh.nodes[n].position);
    }
    return bcs;
}

std::optional<std::string> well_posedness_issue(const BoundaryMesh& mesh,
                                                const BoundaryConditions& bcs) {
    // Rows of the rigid-mode basis (tx, ty, rotation) at Dirichlet dofs.
    std::vector<Eigen::Vector3d> rows;
    for (int n = 0; n < mesh.node_count(); ++n) {
        Vec2 p = mesh.nodes[n].position;
        if (bcs.is_dirichlet(2 * n)) rows.push_back({1.0, 0.0, -p.y});
        if (bcs.is_dirichlet(2 * n + 1)) rows.push_back({0.0, 1.0, p.x});
    }
    if (rows.size() < 3)
        return "fewer than 3 Dirichlet constraints: rigid-body modes are unpinned";
    Eigen::MatrixXd M(rows.size(), 3);
    for (size_t i = 0; i < rows.size(); ++i) M.row(static_cast<int>(i)) = rows[i];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    double scale = std::max(1.0, mesh.diameter());
    if (svd.singularValues()(2) < 1e-12 * scale * std::sqrt(static_cast<double>(rows.size())))
        return "Dirichlet constraints do not pin all rigid-body modes "
               "(translations/rotation remain free)";
    return std::nullopt;
}

BoundaryState bem_solve(const InfluenceMatrices& matrices, const BoundaryConditions& bcs) {
    const int dim = static_cast<int>(matrices.Hhat.rows());
    if (bcs.dof_count() != dim)
        throw ConfigError("bem_solve: boundary conditions do not match matrix size");

    Eigen::MatrixXd A(dim, dim);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
    for (int j = 0; j < dim; ++j) {
        if (bcs.is_dirichlet(j)) {
            A.col(j) = -matrices.G.col(j);
            rhs -= matrices.Hhat.col(j) * bcs.value[j];
        } else {
            A.col(j) = matrices.Hhat.col(j);
            rhs += matrices.G.col(j) * bcs.value[j];
        }
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    double rc = lu.rcond();
    if (!(rc > 1e-14))
        throw NumericsError("bem_solve: system is singular or nearly singular "
                            "(condition estimate " + std::to_string(1.0 / std::max(rc, 1e-300)) +
                            "); check that enough displacements are prescribed");
    Eigen::VectorXd x = lu.solve(rhs);

    BoundaryState st;
    st.u.resize(dim);
    st.t.resize(dim);
    st.u_prescribed.assign(dim, false);
    st.t_prescribed.assign(dim, false);
    for (int j = 0; j < dim; ++j) {
        if (bcs.is_dirichlet(j)) {
            st.u[j] = bcs.value[j];
            st.t[j] = x[j];
            st.u_prescribed[j] = true;
        } else {
            st.u[j] = x[j];
            st.t[j] = bcs.value[j];
            st.t_prescribed[j] = true;
        }
    }
    return st;
}

BoundaryState network_state(const Network& net, const BoundaryMesh& mesh,
                            const BoundaryConditions& bcs, const Material& mat) {
    const int dim = 2 * mesh.node_count();
    BoundaryState st;
    st.u.resize(dim);
    st.t.resize(dim);
    st.u_prescribed.assign(dim, false);
    st.t_prescribed.assign(dim, false);
    for (int n = 0; n < mesh.node_count(); ++n) {
        const CollocationNode& node = mesh.nodes[n];
        Eigen::VectorXd y = forward(net, node.position);
        Vec2 tn{0.0, 0.0};
        // Only Dirichlet dofs need network tractions; Neumann dofs keep data.
        if (bcs.is_dirichlet(2 * n) || bcs.is_dirichlet(2 * n + 1))
            tn = boundary_traction(net, node, mat);
        for (int i = 0; i < 2; ++i) {
            int dof = 2 * n + i;
            if (bcs.is_dirichlet(dof)) {
                st.u[dof] = bcs.value[dof];
                st.u_prescribed[dof] = true;
                st.t[dof] = (i == 0) ? tn.x : tn.y;
            } else {
                st.u[dof] = y[i];
                st.t[dof] = bcs.value[dof];
                st.t_prescribed[dof] = true;
            }
        }
    }
    return st;
}

LossValue binn_loss(const InfluenceMatrices& matrices, const BoundaryState& state) {
    LossValue lv;
    lv.residual = matrices.Hhat * state.u - matrices.G * state.t;
    lv.loss = lv.residual.squaredNorm() / matrices.n_nodes;
    return lv;
}

LossValue binn_loss(const InfluenceMatrices& matrices, const BoundaryConditions& bcs,
                    const Network& net, const BoundaryMesh& mesh, const Material& mat) {
    return binn_loss(matrices, network_state(net, mesh, bcs, mat));
}

namespace {

struct LossGradientWork {
    std::vector<ForwardEval> evals;
    BoundaryState state;
};

// Shared forward pass: evaluate the network at every node and build u, t.
LossGradientWork forward_pass(const InfluenceMatrices& matrices, const BoundaryConditions& bcs,
                              const BoundaryMesh& mesh, const Material& mat, const Network& net) {
    const int n_nodes = mesh.node_count();
    const int dim = 2 * n_nodes;
    if (bcs.dof_count() != dim || matrices.Hhat.rows() != dim)
        throw ConfigError("loss_gradient: mesh, matrices and boundary conditions disagree");
    LossGradientWork w;
    w.evals.reserve(n_nodes);
    w.state.u.resize(dim);
    w.state.t.resize(dim);
    w.state.u_prescribed.assign(dim, false);
    w.state.t_prescribed.assign(dim, false);
    for (int n = 0; n < n_nodes; ++n) {
        const CollocationNode& node = mesh.nodes[n];
        w.evals.push_back(forward_eval(net, node.position));
        const ForwardEval& ev = w.evals.back();
        Vec2 tn{0.0, 0.0};
        if (bcs.is_dirichlet(2 * n) || bcs.is_dirichlet(2 * n + 1)) {
            if (net.mode == OutputMode::DirectTraction) {
                tn = {ev.y[2], ev.y[3]};
            } else {
                Tensor2 g = {{{ev.dy_dx(0, 0), ev.dy_dx(0, 1)},
                              {ev.dy_dx(1, 0), ev.dy_dx(1, 1)}}};
                tn = traction(stress_from_gradient(g, mat), node.normal);
            }
        }
        for (int i = 0; i < 2; ++i) {
            int dof = 2 * n + i;
            if (bcs.is_dirichlet(dof)) {
                w.state.u[dof] = bcs.value[dof];
                w.state.u_prescribed[dof] = true;
                w.state.t[dof] = (i == 0) ? tn.x : tn.y;
            } else {
                w.state.u[dof] = ev.y[i];
                w.state.t[dof] = bcs.value[dof];
                w.state.t_prescribed[dof] = true;
            }
        }
    }
    return w;
}

Eigen::VectorXd gradient_from_work(const InfluenceMatrices& matrices, const BoundaryConditions& bcs,
                                   const BoundaryMesh& mesh, const Material& mat,
                                   const Network& net, const LossGradientWork& w,
                                   const Eigen::VectorXd& residual) {
    const int n_nodes = mesh.node_count();
    const double scale = 2.0 / matrices.n_nodes;
    Eigen::VectorXd ubar = scale * (matrices.Hhat.transpose() * residual);
    Eigen::VectorXd tbar = -scale * (matrices.G.transpose() * residual);

    const double mu = mat.shear_modulus();
    const double lambda = mat.lame_lambda();
    const int out = net.output_count();

    Eigen::VectorXd grad = Eigen::VectorXd::Zero(net.param_count());
    Eigen::VectorXd ybar(out);
    Eigen::MatrixXd jbar(out, 2);
    for (int n = 0; n < n_nodes; ++n) {
        ybar.setZero();
        jbar.setZero();
        bool any = false;
        for (int i = 0; i < 2; ++i) {
            int dof = 2 * n + i;
            if (!bcs.is_dirichlet(dof)) {
                ybar[i] = ubar[dof];
                any = true;
            }
        }
        double tb[2] = {bcs.is_dirichlet(2 * n) ? tbar[2 * n] : 0.0,
                        bcs.is_dirichlet(2 * n + 1) ? tbar[2 * n + 1] : 0.0};
        if (tb[0] != 0.0 || tb[1] != 0.0) {
            any = true;
            if (net.mode == OutputMode::DirectTraction) {
                ybar[2] = tb[0];
                ybar[3] = tb[1];
            } else {
                // t_i = lambda n_i g_kk + mu (g_ij + g_ji) n_j, so
                // d t_i / d g_ab = lambda n_i d_ab + mu (d_ia n_b + d_ib n_a).
                const Vec2 nrm = mesh.nodes[n].normal;
                double nn[2] = {nrm.x, nrm.y};
                double tdotn = tb[0] * nn[0] + tb[1] * nn[1];
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        jbar(a, b) = lambda * tdotn * ((a == b) ? 1.0 : 0.0) +
                                     mu * (tb[a] * nn[b] + nn[a] * tb[b]);
            }
        }
        if (any) accumulate_param_gradient(net, w.evals[n], ybar, jbar, grad);
    }
    return grad;
}

} // namespace

Eigen::VectorXd loss_gradient(const InfluenceMatrices& matrices, const BoundaryConditions& bcs,
                              const BoundaryMesh& mesh, const Material& mat, const Network& net,
                              double* loss_out) {
    LossGradientWork w = forward_pass(matrices, bcs, mesh, mat, net);
    Eigen::VectorXd residual = matrices.Hhat * w.state.u - matrices.G * w.state.t;
    if (loss_out) *loss_out = residual.squaredNorm() / matrices.n_nodes;
    return gradient_from_work(matrices, bcs, mesh, mat, net, w, residual);
}

TrainResult train(const InfluenceMatrices& matrices, const BoundaryConditions& bcs,
                  const BoundaryMesh& mesh, const Material& mat, Network net,
                  const TrainConfig& config) {
    if (config.iterations < 1) throw ConfigError("train: iterations must be >= 1");
    if (!(config.learning_rate > 0.0)) throw ConfigError("train: learning rate must be > 0");

    const int n_params = net.param_count();
    Eigen::VectorXd params = net.flatten_params();
    Eigen::VectorXd m = Eigen::VectorXd::Zero(n_params);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n_params);

    TrainResult result;
    double initial_loss = -1.0;
    auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&t0]() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    double lr_ratio = (config.lr_final > 0.0) ? config.lr_final / config.learning_rate : 1.0;
    for (int it = 1; it <= config.iterations; ++it) {
        double loss = 0.0;
        Eigen::VectorXd grad = loss_gradient(matrices, bcs, mesh, mat, net, &loss);

        if (!std::isfinite(loss) || !grad.allFinite())
            throw DivergenceError("train: non-finite loss or gradient at iteration " +
                                  std::to_string(it) +
                                  " (|params| = " + std::to_string(params.norm()) + ")");
        if (initial_loss < 0.0) initial_loss = loss;
        if (loss > config.divergence_factor * std::max(initial_loss, 1e-300))
            throw DivergenceError("train: loss diverged at iteration " + std::to_string(it) +
                                  " (loss " + std::to_string(loss) + ", initial " +
                                  std::to_string(initial_loss) + ")");

        double lr = config.learning_rate;
        if (lr_ratio != 1.0)
            lr *= std::pow(lr_ratio, static_cast<double>(it - 1) /
                                         std::max(1, config.iterations - 1));

        m = config.beta1 * m + (1.0 - config.beta1) * grad;
        v = config.beta2 * v + (1.0 - config.beta2) * grad.cwiseProduct(grad);
        double mc = 1.0 - std::pow(config.beta1, it);
        double vc = 1.0 - std::pow(config.beta2, it);
        params -= lr * (m / mc).cwiseQuotient(((v / vc).cwiseSqrt().array() + config.epsilon).matrix());
        net.unflatten_params(params);

        if (it == 1 || it == config.iterations || (config.log_every > 0 && it % config.log_every == 0))
            result.history.push_back({it, loss, elapsed()});
    }

    result.final_loss = binn_loss(matrices, bcs, net, mesh, mat).loss;
    result.net = std::move(net);
    return result;
}

} // namespace binn
