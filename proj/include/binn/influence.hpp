#pragma once

#include <Eigen/Dense>

#include "binn/material.hpp"
#include "binn/mesh.hpp"
#include "binn/quadrature.hpp"

namespace binn {

// How the strongly singular self-node diagonal of Hhat is obtained.
enum class SingularTPath {
    RigidBody, // diagonal closed from the translation identity (closed domains)
    Guiggiani, // explicit CPV subtraction
};

struct QuadratureConfig {
    int order = 16;
    SingularTPath t_path = SingularTPath::RigidBody;
    int max_subdivision_depth = 8;
};

// Dense collocation matrices of the discretized BIE: Hhat folds the jump term
// C = I/2 into the T-kernel matrix, so the nodal relation reads
// Hhat u = G t. Rows and columns are (node, direction) with index 2n + i.
struct InfluenceMatrices {
    Eigen::MatrixXd Hhat;
    Eigen::MatrixXd G;
    int n_nodes = 0;
    QuadratureConfig config;
};

InfluenceMatrices assemble(const BoundaryMesh& mesh, const Material& mat,
                           const QuadratureConfig& config = {});

// Overwrite each self-node 2x2 block of Hhat with minus the sum of all other
// column blocks in its row pair, enforcing Hhat * (rigid translation) = 0
// exactly. Only valid for closed bounded domains.
void rigid_body_diagonal(Eigen::MatrixXd& Hhat);

// Induced infinity norm (max absolute row sum).
double matrix_inf_norm(const Eigen::MatrixXd& m);

} // namespace binn
