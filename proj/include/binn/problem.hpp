#pragma once

#include <optional>
#include <string>
#include <vector>

#include "binn/influence.hpp"
#include "binn/network.hpp"
#include "binn/solver.hpp"

namespace binn {

// Parse an affine expression in x and y: sums/differences of products of
// numbers and at most one coordinate per term, e.g. "1000*y", "-0.5 + 2*x".
AffineExpr parse_affine_expr(const std::string& text);

struct NetworkSpec {
    std::vector<int> hidden = {20, 20, 20};
    Activation activation = Activation::Tanh;
    OutputMode mode = OutputMode::Displacement;
    double output_scale = 0.0; // 0 = derive from boundary data ("auto")
    std::uint64_t seed = 1;
};

struct OutputSpec {
    int grid_nx = 30;
    int grid_ny = 30;
    double clearance_fraction = 0.02;
};

// A full problem definition: geometry, material, boundary conditions, and
// solver configuration, read from a versioned JSON file.
struct ProblemSpec {
    int spec_version = 1;
    std::string name;
    Material material;
    double alpha1 = -0.8;
    double alpha3 = 0.8;
    std::vector<GeometrySegment> segments;
    std::vector<SegmentBC> segment_bcs;
    std::vector<PointConstraint> point_constraints;
    NetworkSpec network;
    TrainConfig training;
    QuadratureConfig quadrature;
    OutputSpec output;
    std::string benchmark; // "" or "pure_bending"
    std::string notes;
};

ProblemSpec load_problem(const std::string& path);
ProblemSpec parse_problem(const std::string& json_text);

// Schema plus well-posedness checks (loops close, BCs bind, rigid modes
// pinned) without assembling or solving. Empty result = valid.
std::vector<std::string> validate_problem(const ProblemSpec& spec);

} // namespace binn
