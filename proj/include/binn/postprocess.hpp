#pragma once

#include <vector>

#include "binn/influence.hpp"
#include "binn/solver.hpp"

namespace binn {

// Interior displacement via the representation formula
//   u(P) = integral U t dS - integral T u dS,  P strictly inside.
// Regular Gauss with nearly-singular subdivision; throws DomainError for
// points outside the domain.
Vec2 interior_displacement(Vec2 P, const BoundaryMesh& mesh, const BoundaryState& state,
                           const Material& mat, const QuadratureConfig& config = {});

// Interior stress by central finite differences of the representation
// formula, step h_fd; accuracy degrades within ~10*h_fd of the boundary.
struct InteriorStress {
    double s11 = 0.0, s22 = 0.0, s12 = 0.0;
    bool clearance_ok = true;
};

InteriorStress interior_stress(Vec2 P, const BoundaryMesh& mesh, const BoundaryState& state,
                               const Material& mat, const QuadratureConfig& config = {},
                               double h_fd = 0.0);

// Relative error per sample (Eq.-25 style): |num - exact| / max|exact|, the
// max taken over the provided exact samples.
std::vector<double> relative_error(const std::vector<double>& u_num,
                                   const std::vector<double>& u_exact);

// Closed-form plane-strain pure-bending field for the benchmark beam
// (L = 1, H = 0.1, sigma_xx = 1000*y): with E' = E/(1-nu^2), nu' = nu/(1-nu),
//   u1 = (1000/E') x y,  u2 = -(1000/(2 E')) (x^2 + nu' y^2),  s11 = 1000 y.
// Gauge: u1(0, y) = 0, u2(0, 0) = 0.
struct BendingSolution {
    double u1 = 0.0, u2 = 0.0, s11 = 0.0;
};

BendingSolution benchmark_exact(Vec2 p, const Material& mat);

// Rectangular sample grid with inside/clearance masking and optional exact
// values; rows are emitted to CSV by the io module.
struct FieldSample {
    Vec2 p;
    bool inside = false;
    double u1 = 0.0, u2 = 0.0;
    double s11 = 0.0, s22 = 0.0, s12 = 0.0;
    double err_u1 = 0.0, err_u2 = 0.0;
};

struct FieldGrid {
    std::vector<FieldSample> samples;
    int nx = 0, ny = 0;
};

// Evaluate displacements and stresses on an nx x ny grid over the mesh
// bounding box. Points outside the domain or closer to the boundary than
// clearance_fraction * diameter are masked out.
FieldGrid evaluate_field_grid(const BoundaryMesh& mesh, const BoundaryState& state,
                              const Material& mat, int nx, int ny,
                              double clearance_fraction = 0.02,
                              const QuadratureConfig& config = {});

} // namespace binn
