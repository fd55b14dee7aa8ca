#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "binn/errors.hpp"
#include "binn/problem.hpp"
#include "binn/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSpec = 2;
constexpr int kExitDiverged = 3;
constexpr int kExitNumerics = 4;

bool parse_grid(const std::string& text, std::pair<int, int>& grid) {
    auto x = text.find('x');
    if (x == std::string::npos) return false;
    try {
        grid.first = std::stoi(text.substr(0, x));
        grid.second = std::stoi(text.substr(x + 1));
    } catch (...) {
        return false;
    }
    return grid.first > 0 && grid.second > 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundary integrated neural networks for 2D elastostatics"};
    app.get_formatter()->column_width(30);

    std::string spec_path;
    std::string mode = "bem";
    std::string out_dir = ".";
    std::string grid_text;
    std::uint64_t seed = 0;
    bool have_seed = false;
    bool validate_only = false;
    bool dump_matrices = false;

    app.add_option("spec", spec_path, "Problem definition file")->required();
    app.add_option("--mode", mode, "Solution path: bem (direct solve) or binn (network training)")
        ->check(CLI::IsMember({"bem", "binn"}));
    app.add_option("--out", out_dir, "Output directory (created if missing)");
    app.add_option("--seed", seed, "Override the network seed")->each([&](const std::string&) {
        have_seed = true;
    });
    app.add_option("--grid", grid_text, "Field-grid resolution, e.g. 50x50");
    app.add_flag("--validate", validate_only, "Check the problem file and exit");
    app.add_flag("--dump-matrices", dump_matrices, "Write hhat.bin / g.bin influence matrices");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitSpec;
    }

    try {
        binn::ProblemSpec spec = binn::load_problem(spec_path);
        auto issues = binn::validate_problem(spec);
        if (validate_only) {
            if (issues.empty()) {
                std::cout << "ok: " << spec.name << " (" << spec.segments.size()
                          << " segments)\n";
                return kExitOk;
            }
            for (const auto& issue : issues) std::cerr << "error: " << issue << '\n';
            return kExitSpec;
        }
        if (!issues.empty()) {
            for (const auto& issue : issues) std::cerr << "error: " << issue << '\n';
            return kExitSpec;
        }

        binn::RunOptions options;
        options.mode = mode == "bem" ? binn::RunMode::Bem : binn::RunMode::Binn;
        options.out_dir = out_dir;
        options.dump_matrices = dump_matrices;
        if (have_seed) options.seed = seed;
        if (!grid_text.empty()) {
            std::pair<int, int> g;
            if (!parse_grid(grid_text, g)) {
                std::cerr << "error: --grid expects NxM, got '" << grid_text << "'\n";
                return kExitSpec;
            }
            options.grid = g;
        }
        binn::run_problem(spec, options);
        return kExitOk;
    } catch (const binn::SpecError& e) {
        std::cerr << "spec error: " << e.what() << '\n';
        return kExitSpec;
    } catch (const binn::GeometryError& e) {
        std::cerr << "geometry error: " << e.what() << '\n';
        return kExitSpec;
    } catch (const binn::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitSpec;
    } catch (const binn::DivergenceError& e) {
        std::cerr << "training diverged: " << e.what() << '\n';
        return kExitDiverged;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerics;
    }
}
