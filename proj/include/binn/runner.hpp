#pragma once

#include <optional>
#include <string>

#include "binn/problem.hpp"

namespace binn {

// Affinely map boundary coordinates onto [-1,1]^2 for the network inputs.
void fit_input_normalization(Network& net, const BoundaryMesh& mesh);

// Characteristic output scales derived from the boundary data, so the network
// trains on O(1) targets: U0 from the largest prescribed displacement, or
// T0 * diameter / (2 mu) when no displacement data is nonzero; T0 likewise
// from the largest prescribed traction.
Eigen::VectorXd auto_output_scale(const BoundaryMesh& mesh, const BoundaryConditions& bcs,
                                  const Material& mat, OutputMode mode);

// Build the network for a problem: init, normalization, output scaling.
Network make_network(const ProblemSpec& spec, const BoundaryMesh& mesh,
                     const BoundaryConditions& bcs, std::uint64_t seed);

enum class RunMode { Bem, Binn };

struct RunOptions {
    RunMode mode = RunMode::Bem;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::pair<int, int>> grid;
    bool dump_matrices = false;
};

// Full pipeline: mesh -> assemble -> (bem | train) -> postprocess -> emit
// boundary-state/field CSVs, loss history (binn), checkpoint (binn) and a
// machine-readable summary.json in out_dir.
void run_problem(const ProblemSpec& spec, const RunOptions& options);

} // namespace binn
