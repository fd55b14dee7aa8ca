#include "binn/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "binn/errors.hpp"
#include "binn/io.hpp"
#include "binn/postprocess.hpp"

namespace binn {

void fit_input_normalization(Network& net, const BoundaryMesh& mesh) {
    Vec2 lo = mesh.bbox_min(), hi = mesh.bbox_max();
    net.in_shift = 0.5 * (lo + hi);
    net.in_scale = {std::max(0.5 * (hi.x - lo.x), 1e-12), std::max(0.5 * (hi.y - lo.y), 1e-12)};
}

Eigen::VectorXd auto_output_scale(const BoundaryMesh& mesh, const BoundaryConditions& bcs,
                                  const Material& mat, OutputMode mode) {
    double u0 = 0.0, t0 = 0.0;
    for (int dof = 0; dof < bcs.dof_count(); ++dof) {
        double v = std::abs(bcs.value[dof]);
        if (bcs.is_dirichlet(dof))
            u0 = std::max(u0, v);
        else
            t0 = std::max(t0, v);
    }
    double mu = mat.shear_modulus();
    double L = mesh.diameter();
    if (u0 == 0.0 && t0 > 0.0) u0 = t0 * L / (2.0 * mu);
    if (u0 == 0.0) u0 = 1.0;
    if (t0 == 0.0) t0 = 2.0 * mu * u0 / L;
    Eigen::VectorXd scale;
    if (mode == OutputMode::Displacement) {
        scale.resize(2);
        scale << u0, u0;
    } else {
        scale.resize(4);
        scale << u0, u0, t0, t0;
    }
    return scale;
}

Network make_network(const ProblemSpec& spec, const BoundaryMesh& mesh,
                     const BoundaryConditions& bcs, std::uint64_t seed) {
    std::vector<int> widths;
    widths.push_back(2);
    for (int w : spec.network.hidden) widths.push_back(w);
    widths.push_back(spec.network.mode == OutputMode::Displacement ? 2 : 4);
    Network net = init_network(widths, spec.network.activation, seed, spec.network.mode);
    fit_input_normalization(net, mesh);
    if (spec.network.output_scale > 0.0)
        net.out_scale.setConstant(spec.network.output_scale);
    else
        net.out_scale = auto_output_scale(mesh, bcs, spec.material, spec.network.mode);
    return net;
}

namespace {

// Eq.-25 style relative difference between two dof vectors, normalized by the
// max magnitude of the reference.
double max_relative_diff(const Eigen::VectorXd& num, const Eigen::VectorXd& ref) {
    double scale = ref.cwiseAbs().maxCoeff();
    if (scale == 0.0) return num.cwiseAbs().maxCoeff() == 0.0 ? 0.0 : INFINITY;
    return (num - ref).cwiseAbs().maxCoeff() / scale;
}

struct StageTimer {
    std::chrono::steady_clock::time_point t = std::chrono::steady_clock::now();
    double lap() {
        auto now = std::chrono::steady_clock::now();
        double s = std::chrono::duration<double>(now - t).count();
        t = now;
        return s;
    }
};

} // namespace

void run_problem(const ProblemSpec& spec, const RunOptions& options) {
    namespace fs = std::filesystem;
    fs::create_directories(options.out_dir);
    auto path = [&](const std::string& name) { return (fs::path(options.out_dir) / name).string(); };

    nlohmann::json summary;
    nlohmann::json timings;
    StageTimer timer;

    BoundaryMesh mesh = build_mesh(spec.segments, spec.alpha1, spec.alpha3);
    BoundaryConditions bcs = bind_bcs(mesh, spec.segment_bcs, spec.point_constraints);
    if (auto issue = well_posedness_issue(mesh, bcs))
        throw SpecError("problem is ill-posed: " + *issue);
    timings["mesh_s"] = timer.lap();

    InfluenceMatrices matrices = assemble(mesh, spec.material, spec.quadrature);
    timings["assemble_s"] = timer.lap();
    if (options.dump_matrices) {
        dump_matrix(path("hhat.bin"), matrices.Hhat);
        dump_matrix(path("g.bin"), matrices.G);
    }

    BoundaryState oracle = bem_solve(matrices, bcs);
    timings["bem_solve_s"] = timer.lap();

    summary["problem"] = spec.name;
    summary["spec_version"] = spec.spec_version;
    summary["mode"] = options.mode == RunMode::Bem ? "bem" : "binn";
    summary["n_elements"] = mesh.element_count();
    summary["n_nodes"] = mesh.node_count();
    summary["quadrature_order"] = spec.quadrature.order;
    summary["singular_path"] =
        spec.quadrature.t_path == SingularTPath::RigidBody ? "rigid_body" : "guiggiani";

    BoundaryState state = oracle;
    if (options.mode == RunMode::Binn) {
        std::uint64_t seed = options.seed.value_or(spec.network.seed);
        summary["seed"] = seed;
        Network net = make_network(spec, mesh, bcs, seed);
        TrainResult result = train(matrices, bcs, mesh, spec.material, std::move(net), spec.training);
        timings["train_s"] = timer.lap();
        summary["iterations"] = spec.training.iterations;
        summary["loss_final"] = result.final_loss;
        state = network_state(result.net, mesh, bcs, spec.material);
        summary["comparison"]["vs_oracle"] = {
            {"max_rel_u", max_relative_diff(state.u, oracle.u)},
            {"max_rel_t", max_relative_diff(state.t, oracle.t)},
        };
        write_loss_history_csv(path("loss_history.csv"), result.history);
        save_network(path("network.json"), result.net);
    }

    if (spec.benchmark == "pure_bending") {
        Eigen::VectorXd exact_u(state.u.size());
        for (int n = 0; n < mesh.node_count(); ++n) {
            BendingSolution b = benchmark_exact(mesh.nodes[n].position, spec.material);
            exact_u[2 * n] = b.u1;
            exact_u[2 * n + 1] = b.u2;
        }
        summary["comparison"]["vs_benchmark"] = {
            {"max_rel_u_boundary", max_relative_diff(state.u, exact_u)},
        };
    }

    write_boundary_state_csv(path("boundary_state.csv"), mesh, state);

    int nx = spec.output.grid_nx, ny = spec.output.grid_ny;
    if (options.grid) {
        nx = options.grid->first;
        ny = options.grid->second;
    }
    FieldGrid grid = evaluate_field_grid(mesh, state, spec.material, nx, ny,
                                         spec.output.clearance_fraction, spec.quadrature);
    if (spec.benchmark == "pure_bending") {
        std::vector<double> num1, num2, ex1, ex2;
        for (const auto& s : grid.samples) {
            if (!s.inside) continue;
            BendingSolution b = benchmark_exact(s.p, spec.material);
            num1.push_back(s.u1);
            num2.push_back(s.u2);
            ex1.push_back(b.u1);
            ex2.push_back(b.u2);
        }
        if (!num1.empty()) {
            auto e1 = relative_error(num1, ex1);
            auto e2 = relative_error(num2, ex2);
            size_t at = 0;
            for (auto& s : grid.samples) {
                if (!s.inside) continue;
                s.err_u1 = e1[at];
                s.err_u2 = e2[at];
                ++at;
            }
        }
    }
    write_field_grid_csv(path("field_grid.csv"), grid);
    timings["postprocess_s"] = timer.lap();

    summary["timings"] = timings;
    std::ofstream out(path("summary.json"));
    if (!out) throw NumericsError("cannot write summary.json");
    out << summary.dump(1) << '\n';
}

} // namespace binn
