#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "binn/mesh.hpp"
#include "binn/network.hpp"
#include "binn/postprocess.hpp"
#include "binn/solver.hpp"

namespace binn {

// Boundary-state CSV: node, x, y, nx, ny, u1, u2, t1, t2, provenance.
// Provenance is four characters for (u1, u2, t1, t2): 'p' prescribed,
// 's' solved/network.
void write_boundary_state_csv(const std::string& path, const BoundaryMesh& mesh,
                              const BoundaryState& state);

struct BoundaryStateRow {
    int node = 0;
    Vec2 position, normal;
    double u1 = 0, u2 = 0, t1 = 0, t2 = 0;
    std::string provenance;
};
std::vector<BoundaryStateRow> read_boundary_state_csv(const std::string& path);

// Loss-history CSV: iteration, loss, wall_seconds.
void write_loss_history_csv(const std::string& path, const std::vector<TrainRecord>& history);
std::vector<TrainRecord> read_loss_history_csv(const std::string& path);

// Field-grid CSV: x, y, inside, u1, u2, s11, s22, s12, err_u1, err_u2.
void write_field_grid_csv(const std::string& path, const FieldGrid& grid);
FieldGrid read_field_grid_csv(const std::string& path);

// Binary matrix dump: 8-byte magic "BINNMAT1", two little-endian uint64
// (rows, cols), then rows*cols row-major float64 values.
void dump_matrix(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd load_matrix(const std::string& path);

// Network checkpoint: self-describing JSON with widths, activation, output
// mode, normalization, per-channel output scales and the flat parameter
// vector. Doubles round-trip exactly.
void save_network(const std::string& path, const Network& net);
Network load_network(const std::string& path);

} // namespace binn
