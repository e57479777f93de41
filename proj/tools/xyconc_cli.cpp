#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xyconc/xyconc.hpp"

// Command-line front end. All real work lives in the library's cmd_*
// functions; this file parses flags and maps exceptions to the exit-code
// contract: 0 success, 2 input/validation, 3 numeric failure,
// 4 cross-validation disagreement.

namespace {

xyconc::Axis parse_axis(const std::string& text, const char* name) {
    std::vector<std::string> parts;
    std::size_t begin = 0;
    while (true) {
        const std::size_t colon = text.find(':', begin);
        parts.push_back(text.substr(begin, colon == std::string::npos ? colon : colon - begin));
        if (colon == std::string::npos) break;
        begin = colon + 1;
    }
    if (parts.size() != 3)
        throw std::invalid_argument(std::string(name) +
                                    " axis must be start:stop:count, got '" + text + "'");
    xyconc::Axis axis;
    try {
        std::size_t used = 0;
        axis.start = std::stod(parts[0], &used);
        if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
        axis.stop = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
        const long long count = std::stoll(parts[2], &used);
        if (used != parts[2].size() || count < 0) throw std::invalid_argument(parts[2]);
        axis.count = static_cast<std::size_t>(count);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string(name) + " axis has a malformed field in '" +
                                    text + "'");
    }
    return axis;
}

void parse_grid(const std::string& grid, xyconc::SweepOptions& opts) {
    std::vector<std::string> parts;
    std::size_t begin = 0;
    while (true) {
        const std::size_t comma = grid.find(',', begin);
        parts.push_back(grid.substr(begin, comma == std::string::npos ? comma : comma - begin));
        if (comma == std::string::npos) break;
        begin = comma + 1;
    }
    if (parts.size() != 2 && parts.size() != 3)
        throw std::invalid_argument(
            "grid must be omega axis,delta axis[,nbar axis] with each axis start:stop:count");
    opts.omega_bar = parse_axis(parts[0], "omega_bar");
    opts.delta_bar = parse_axis(parts[1], "delta_bar");
    if (parts.size() == 3) opts.nbar = parse_axis(parts[2], "nbar");
}

void add_model_flags(CLI::App* cmd, xyconc::ModelParams& p) {
    cmd->add_option("--omega", p.omega, "qubit level splitting")->capture_default_str();
    cmd->add_option("--j", p.j, "exchange coupling")->capture_default_str();
    cmd->add_option("--delta", p.delta, "interaction anisotropy")->capture_default_str();
    cmd->add_option("--gamma", p.gamma, "relaxation rate")->capture_default_str();
    cmd->add_option("--nbar", p.nbar, "mean thermal occupation of the bath")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"steady-state entanglement of two XY-coupled qubits in a thermal bath"};
    app.require_subcommand(1);

    xyconc::EvolveOptions evolve_opts;
    CLI::App* evolve = app.add_subcommand("evolve", "integrate a trajectory and write it as CSV");
    add_model_flags(evolve, evolve_opts.params);
    evolve->add_option("--initial", evolve_opts.initial,
                       "named initial state (gg, bell_gg_ee, mixed_fig1) or matrix file path")
        ->capture_default_str();
    evolve->add_option("--t-max", evolve_opts.t_max, "integration horizon (default 30/gamma)");
    evolve->add_option("--dt", evolve_opts.dt, "integrator step (default from the step bound)");
    evolve->add_option("--out", evolve_opts.out_path, "output CSV path")->required();
    evolve->add_flag("--allow-restricted", evolve_opts.allow_restricted,
                     "run outside the weak-coupling parameter restrictions");
    evolve->add_flag("--scaled", evolve_opts.scaled,
                     "treat omega, j, delta as gamma-scaled values (sets gamma = 1)");

    xyconc::SteadyOptions steady_opts;
    CLI::App* steady = app.add_subcommand("steady", "compute the steady state");
    add_model_flags(steady, steady_opts.params);
    steady->add_option("--method", steady_opts.method,
                       "analytic, nullspace, longtime or all (cross-validated)")
        ->capture_default_str();
    steady->add_option("--out", steady_opts.out_path,
                       "output path for the JSON-lines records (default stdout)");
    steady->add_flag("--scaled", steady_opts.scaled,
                     "treat omega, j, delta as gamma-scaled values (sets gamma = 1)");

    xyconc::SweepOptions sweep_opts;
    std::string grid;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "steady concurrence over a grid of scaled parameters (gamma = 1)");
    sweep->add_option("--grid", grid,
                      "omega axis,delta axis[,nbar axis], each axis start:stop:count")
        ->required();
    sweep->add_option("--out", sweep_opts.out_path, "output CSV path")->required();

    xyconc::FiguresOptions figures_opts;
    CLI::App* figures = app.add_subcommand("figures", "write the bundled figure datasets");
    figures->add_option("--which", figures_opts.which, "fig1, fig2, fig3, fig4 or all")
        ->capture_default_str();
    figures->add_option("--outdir", figures_opts.outdir, "output directory")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (evolve->parsed()) {
            xyconc::cmd_evolve(evolve_opts, std::cout);
        } else if (steady->parsed()) {
            if (steady_opts.out_path.empty()) {
                xyconc::cmd_steady(steady_opts, std::cout);
            } else {
                std::ofstream out(steady_opts.out_path, std::ios::binary);
                if (!out)
                    throw std::invalid_argument("cannot open output file: " +
                                                steady_opts.out_path);
                xyconc::cmd_steady(steady_opts, out);
            }
        } else if (sweep->parsed()) {
            parse_grid(grid, sweep_opts);
            std::ofstream out(sweep_opts.out_path, std::ios::binary);
            if (!out)
                throw std::invalid_argument("cannot open output file: " + sweep_opts.out_path);
            const xyconc::SweepSummary summary = xyconc::cmd_sweep(sweep_opts, out);
            std::cout << "max C = " << summary.max_c << " at omega_bar = "
                      << summary.at_omega_bar << ", delta_bar = " << summary.at_delta_bar;
            if (sweep_opts.nbar) std::cout << ", nbar = " << summary.at_nbar;
            std::cout << " (" << summary.rows << " rows)\n";
        } else if (figures->parsed()) {
            xyconc::cmd_figures(figures_opts, std::cout);
        }
    } catch (const xyconc::cross_validation_error& e) {
        std::cerr << "cross-validation error: " << e.what() << '\n';
        return 4;
    } catch (const xyconc::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
