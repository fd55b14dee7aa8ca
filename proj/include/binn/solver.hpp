#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "binn/influence.hpp"
#include "binn/network.hpp"

namespace binn {

enum class BCKind { Dirichlet, Neumann };

// Affine function of the coordinates: c + cx*x + cy*y. All boundary-value
// expressions in problem definitions reduce to this form.
struct AffineExpr {
    double c = 0.0, cx = 0.0, cy = 0.0;
    double eval(Vec2 p) const { return c + cx * p.x + cy * p.y; }
};

// Per-segment boundary conditions: one kind/value per direction.
struct SegmentBC {
    std::string segment;
    BCKind kind1 = BCKind::Neumann;
    AffineExpr value1;
    BCKind kind2 = BCKind::Neumann;
    AffineExpr value2;
};

// Overrides the (node, direction) nearest to `near` on the named segment.
struct PointConstraint {
    std::string segment;
    Vec2 near;
    int direction = 0; // 0 or 1
    BCKind kind = BCKind::Dirichlet;
    AffineExpr value;
};

// Fully resolved per-dof boundary conditions; dof index = 2*node + direction.
struct BoundaryConditions {
    std::vector<BCKind> kind;
    Eigen::VectorXd value;

    int dof_count() const { return static_cast<int>(kind.size()); }
    bool is_dirichlet(int dof) const { return kind[dof] == BCKind::Dirichlet; }
};

BoundaryConditions bind_bcs(const BoundaryMesh& mesh, const std::vector<SegmentBC>& segment_bcs,
                            const std::vector<PointConstraint>& points = {});

// Rigid-mode check: returns a diagnostic if the Dirichlet constraints cannot
// pin the two translations and the rotation.
std::optional<std::string> well_posedness_issue(const BoundaryMesh& mesh,
                                                const BoundaryConditions& bcs);

// Full nodal vectors mixing prescribed data and solved/network values.
struct BoundaryState {
    Eigen::VectorXd u;
    Eigen::VectorXd t;
    std::vector<bool> u_prescribed; // per dof
    std::vector<bool> t_prescribed;
};

// Direct BEM oracle: rearrange Hhat u = G t into A x = b by unknown type and
// solve with dense partially pivoted LU.
BoundaryState bem_solve(const InfluenceMatrices& matrices, const BoundaryConditions& bcs);

// Boundary state induced by a network under the given BCs: prescribed entries
// from data, unknown displacements from forward(), unknown tractions from
// boundary_traction().
BoundaryState network_state(const Network& net, const BoundaryMesh& mesh,
                            const BoundaryConditions& bcs, const Material& mat);

// BIE-residual loss of a boundary state: r = Hhat u - G t,
// loss = |r|^2 / N_total (the two per-direction sums of the residual).
struct LossValue {
    double loss = 0.0;
    Eigen::VectorXd residual;
};

LossValue binn_loss(const InfluenceMatrices& matrices, const BoundaryState& state);
LossValue binn_loss(const InfluenceMatrices& matrices, const BoundaryConditions& bcs,
                    const Network& net, const BoundaryMesh& mesh, const Material& mat);

struct TrainConfig {
    int iterations = 5000;
    double learning_rate = 1e-3;
    double lr_final = 0.0; // > 0: exponential decay from learning_rate to lr_final
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int log_every = 100;
    double divergence_factor = 1e6;
};

struct TrainRecord {
    int iteration = 0;
    double loss = 0.0;
    double wall_seconds = 0.0;
};

struct TrainResult {
    Network net;
    std::vector<TrainRecord> history;
    double final_loss = 0.0;
};

// Full-batch Adam on the BIE-residual loss. The influence matrices are fixed,
// so one iteration costs two matrix-vector products, their transposes, and a
// forward/reverse network sweep per collocation node.
TrainResult train(const InfluenceMatrices& matrices, const BoundaryConditions& bcs,
                  const BoundaryMesh& mesh, const Material& mat, Network net,
                  const TrainConfig& config);

// Exact gradient of binn_loss with respect to the flat parameter vector.
Eigen::VectorXd loss_gradient(const InfluenceMatrices& matrices, const BoundaryConditions& bcs,
                              const BoundaryMesh& mesh, const Material& mat, const Network& net,
                              double* loss_out = nullptr);

} // namespace binn
