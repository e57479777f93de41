#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xyconc/analytic.hpp"
#include "xyconc/dynamics.hpp"
#include "xyconc/entanglement.hpp"
#include "xyconc/errors.hpp"
#include "xyconc/io.hpp"
#include "xyconc/model.hpp"

// Command implementations shared by the CLI binary and the test drivers.
// Each cmd_* function does the work and writes its data product; the CLI
// layer only parses flags and maps exceptions to exit codes.

namespace xyconc {
namespace detail {

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    return out;
}

}  // namespace detail

// Accepts one of the named initial states or a path to a matrix file.
inline DensityMatrix resolve_initial_state(const std::string& initial) {
    for (std::string_view name : initial_state_names)
        if (initial == name) return named_initial_state(initial);
    return read_density_matrix_file(initial);
}

struct EvolveOptions {
    ModelParams params;
    std::string initial = "gg";
    double t_max = 0.0;
    double dt = 0.0;
    std::size_t stride = 1;
    std::string out_path;
    bool allow_restricted = false;
    bool scaled = false;
};

struct EvolveSummary {
    double final_c = 0.0;
    double final_time = 0.0;
    std::optional<double> converged_at;
};

inline EvolveSummary cmd_evolve(const EvolveOptions& opts, std::ostream& status) {
    ModelParams p = opts.params;
    if (opts.scaled) p.gamma = 1.0;
    validate_params(p);
    if (!opts.allow_restricted) {
        const RestrictionReport report = check_restrictions(p);
        if (!report.passed)
            throw std::domain_error(report.describe() +
                                    "; pass --allow-restricted to run anyway");
    }
    if (opts.out_path.empty()) throw std::invalid_argument("evolve requires an output path");

    const DensityMatrix rho0 = resolve_initial_state(opts.initial);
    IntegratorConfig cfg;
    cfg.dt = opts.dt;
    cfg.t_max = opts.t_max;
    cfg.record_stride = opts.stride;
    const Trajectory traj = integrate(p, rho0, cfg);

    std::ofstream out = detail::open_output(opts.out_path);
    write_trajectory_csv(out, traj, p.gamma);

    EvolveSummary summary;
    summary.final_c = traj.concurrences.back();
    summary.final_time = traj.times.back();
    summary.converged_at = traj.converged_at;
    status << "C = " << detail::format_g17(summary.final_c) << " at gamma t = "
           << detail::format_g17(p.gamma * summary.final_time);
    if (summary.converged_at)
        status << "; converged at gamma t = "
               << detail::format_g17(p.gamma * *summary.converged_at);
    else
        status << "; no convergence within the horizon";
    status << '\n';
    return summary;
}

struct SteadyOptions {
    ModelParams params;
    std::string method = "all";
    std::string out_path;
    bool scaled = false;
};

struct SteadyRecord {
    SteadyMethod method;
    DensityMatrix rho;
    double residual = 0.0;
    double c = 0.0;
};

struct SteadySummary {
    std::vector<SteadyRecord> records;
    std::optional<double> max_pairwise_deviation;
};

namespace detail {

inline SteadyRecord steady_record(const ModelParams& p, SteadyMethod method) {
    switch (method) {
        case SteadyMethod::analytic: {
            const AnalyticSteadyState s = steady_state_finite_t(p);
            const double residual = max_abs(master_rhs(p, s.rho.matrix()));
            // The scalar closed form is deliberately evaluated instead of the
            // matrix's concurrence so that a defect in either expression
            // surfaces as a cross-method disagreement.
            return SteadyRecord{method, s.rho, residual, steady_concurrence_finite_t(p)};
        }
        case SteadyMethod::nullspace: {
            const SteadyStateResult r = steady_state_nullspace(p);
            return SteadyRecord{method, r.rho, r.residual, concurrence(r.rho).c};
        }
        case SteadyMethod::longtime: {
            const SteadyStateResult r =
                steady_state_longtime(p, named_initial_state("gg"), IntegratorConfig{});
            return SteadyRecord{method, r.rho, r.residual, concurrence(r.rho).c};
        }
    }
    throw std::invalid_argument("unknown steady-state method");
}

inline void emit_steady_record(std::ostream& out, const SteadyRecord& rec) {
    nlohmann::ordered_json j;
    j["method"] = to_string(rec.method);
    j["c"] = rec.c;
    j["residual"] = rec.residual;
    const ComplexMatrix<4>& m = rec.rho.matrix();
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            const std::string base = "rho" + std::to_string(i + 1) + std::to_string(k + 1);
            j[base + "_re"] = m(i, k).real();
            j[base + "_im"] = m(i, k).imag();
        }
    out << j.dump() << '\n';
}

}  // namespace detail

// Emits one JSON-lines record per method. With method "all" a final summary
// line reports the maximum pairwise deviation across the methods' density
// matrices and concurrences; past 1e-6 that is a cross-validation failure.
inline SteadySummary cmd_steady(const SteadyOptions& opts, std::ostream& out) {
    ModelParams p = opts.params;
    if (opts.scaled) p.gamma = 1.0;
    validate_params(p);

    std::vector<SteadyMethod> methods;
    if (opts.method == "analytic")
        methods = {SteadyMethod::analytic};
    else if (opts.method == "nullspace")
        methods = {SteadyMethod::nullspace};
    else if (opts.method == "longtime")
        methods = {SteadyMethod::longtime};
    else if (opts.method == "all")
        methods = {SteadyMethod::analytic, SteadyMethod::nullspace, SteadyMethod::longtime};
    else
        throw std::invalid_argument("unknown method '" + opts.method +
                                    "' (expected analytic, nullspace, longtime or all)");

    SteadySummary summary;
    for (SteadyMethod method : methods) {
        summary.records.push_back(detail::steady_record(p, method));
        detail::emit_steady_record(out, summary.records.back());
    }

    if (methods.size() > 1) {
        double deviation = 0.0;
        for (std::size_t a = 0; a < summary.records.size(); ++a)
            for (std::size_t b = a + 1; b < summary.records.size(); ++b) {
                deviation = std::max(deviation,
                                     max_abs_diff(summary.records[a].rho.matrix(),
                                                  summary.records[b].rho.matrix()));
                deviation = std::max(
                    deviation, std::abs(summary.records[a].c - summary.records[b].c));
            }
        summary.max_pairwise_deviation = deviation;
        nlohmann::ordered_json j;
        j["max_pairwise_deviation"] = deviation;
        out << j.dump() << '\n';
        out.flush();
        if (!(deviation <= 1e-6))
            throw cross_validation_error("steady-state methods disagree by " +
                                         detail::num_str(deviation));
    }
    return summary;
}

struct Axis {
    double start = 0.0;
    double stop = 0.0;
    std::size_t count = 0;
};

struct SweepOptions {
    Axis omega_bar;
    Axis delta_bar;
    std::optional<Axis> nbar;
    std::string out_path;
};

struct SweepSummary {
    double max_c = 0.0;
    double at_omega_bar = 0.0;
    double at_delta_bar = 0.0;
    double at_nbar = 0.0;
    std::size_t rows = 0;
};

namespace detail {

inline std::vector<double> axis_values(const Axis& axis, const char* name) {
    if (!std::isfinite(axis.start) || !std::isfinite(axis.stop))
        throw std::invalid_argument(std::string(name) + " axis bounds must be finite");
    if (axis.count < 2)
        throw std::invalid_argument(std::string(name) + " axis needs at least 2 points");
    if (!(axis.start < axis.stop))
        throw std::invalid_argument(std::string(name) + " axis needs start < stop");
    std::vector<double> values(axis.count);
    const double step = (axis.stop - axis.start) / static_cast<double>(axis.count - 1);
    for (std::size_t k = 0; k < axis.count; ++k)
        values[k] = axis.start + static_cast<double>(k) * step;
    return values;
}

}  // namespace detail

// Steady concurrence over a grid of scaled parameters (gamma = 1), one CSV
// row per point in row-major axis order. Two-axis sweeps append a ridge
// summary as comment rows: per omega_bar, the grid argmax over delta_bar,
// the closed-form prediction, and the row maximum.
inline SweepSummary cmd_sweep(const SweepOptions& opts, std::ostream& out) {
    const std::vector<double> omegas = detail::axis_values(opts.omega_bar, "omega_bar");
    const std::vector<double> deltas = detail::axis_values(opts.delta_bar, "delta_bar");
    std::vector<double> nbars;
    if (opts.nbar) nbars = detail::axis_values(*opts.nbar, "nbar");

    out << "omega_bar,delta_bar" << (opts.nbar ? ",nbar" : "") << ",c\n";

    SweepSummary summary;
    struct RidgePoint {
        double argmax_delta = 0.0;
        double c_max = -1.0;
    };
    std::vector<RidgePoint> ridge(omegas.size());

    bool first = true;
    for (std::size_t io = 0; io < omegas.size(); ++io) {
        for (double delta : deltas) {
            const auto evaluate = [&](double nbar) {
                ModelParams p;
                p.omega = omegas[io];
                p.j = 0.0;
                p.delta = delta;
                p.gamma = 1.0;
                p.nbar = nbar;
                const double c = steady_concurrence_finite_t(p);
                out << detail::format_g17(omegas[io]) << ',' << detail::format_g17(delta);
                if (opts.nbar) out << ',' << detail::format_g17(nbar);
                out << ',' << detail::format_g17(c) << '\n';
                ++summary.rows;
                if (first || c > summary.max_c) {
                    summary.max_c = c;
                    summary.at_omega_bar = omegas[io];
                    summary.at_delta_bar = delta;
                    summary.at_nbar = nbar;
                    first = false;
                }
                if (!opts.nbar && c > ridge[io].c_max) {
                    ridge[io].c_max = c;
                    ridge[io].argmax_delta = delta;
                }
            };
            if (opts.nbar)
                for (double nbar : nbars) evaluate(nbar);
            else
                evaluate(0.0);
        }
    }

    if (!opts.nbar) {
        for (std::size_t io = 0; io < omegas.size(); ++io) {
            out << "# ridge omega_bar=" << detail::format_g17(omegas[io])
                << " argmax_delta_bar=" << detail::format_g17(ridge[io].argmax_delta)
                << " predicted_delta_bar=" << detail::format_g17(delta_max(omegas[io], 1.0))
                << " c_max=" << detail::format_g17(ridge[io].c_max) << '\n';
        }
        out << "# global max c=" << detail::format_g17(summary.max_c)
            << " at omega_bar=" << detail::format_g17(summary.at_omega_bar)
            << " delta_bar=" << detail::format_g17(summary.at_delta_bar) << '\n';
    }
    return summary;
}

struct FiguresOptions {
    std::string which = "all";
    std::string outdir = ".";
};

namespace detail {

inline const ModelParams fig1_params{1.0, 0.1, 0.1, 0.3, 0.0};
inline const ModelParams fig2_params{1.0, 0.1, 0.458, 0.458, 0.0};

inline void figure_trajectories(const ModelParams& p, const std::string& tag,
                                const std::string& outdir,
                                std::vector<std::string>& written) {
    IntegratorConfig cfg;
    cfg.dt = 1e-3 / p.gamma;
    cfg.t_max = 10.0 / p.gamma;
    cfg.record_stride = 10;

    for (std::string_view name : initial_state_names) {
        const Trajectory traj = integrate(p, named_initial_state(name), cfg);
        const std::string path = outdir + "/" + tag + "_" + std::string(name) + ".csv";
        std::ofstream out = open_output(path);
        if (name == "gg") {
            std::vector<double> overlay(traj.times.size());
            for (std::size_t k = 0; k < traj.times.size(); ++k) {
                const ComplexMatrix<4> product = transform_from_eigenbasis(
                    p, analytic_trajectory_gg(p, traj.times[k]));
                overlay[k] = concurrence(DensityMatrix(product)).c;
            }
            write_trajectory_csv(out, traj, p.gamma, "c_analytic", &overlay);
        } else {
            write_trajectory_csv(out, traj, p.gamma);
        }
        written.push_back(path);
    }
}

}  // namespace detail

// Writes the figure datasets: fig1/fig2 are the three-initial-state
// trajectory families for the weak- and strong-anisotropy parameter sets
// (with a closed-form overlay column on the gg run), fig3 is the steady
// concurrence surface over scaled parameters, and fig4 is the steady
// concurrence against mean occupation for both parameter sets.
inline std::vector<std::string> cmd_figures(const FiguresOptions& opts, std::ostream& status) {
    const bool all = opts.which == "all";
    if (!all && opts.which != "fig1" && opts.which != "fig2" && opts.which != "fig3" &&
        opts.which != "fig4")
        throw std::invalid_argument("unknown figure '" + opts.which +
                                    "' (expected fig1, fig2, fig3, fig4 or all)");

    std::vector<std::string> written;
    if (all || opts.which == "fig1")
        detail::figure_trajectories(detail::fig1_params, "fig1", opts.outdir, written);
    if (all || opts.which == "fig2")
        detail::figure_trajectories(detail::fig2_params, "fig2", opts.outdir, written);

    if (all || opts.which == "fig3") {
        SweepOptions sweep;
        sweep.omega_bar = Axis{0.0, 5.0, 400};
        sweep.delta_bar = Axis{0.0, 3.0, 400};
        const std::string path = opts.outdir + "/fig3_surface.csv";
        std::ofstream out = detail::open_output(path);
        cmd_sweep(sweep, out);
        written.push_back(path);
    }

    if (all || opts.which == "fig4") {
        const double star1 = vanishing_temperature(detail::fig1_params);
        const double star2 = vanishing_temperature(detail::fig2_params);
        const double upper = 1.2 * std::max(star1, star2);
        const std::string path = opts.outdir + "/fig4_thermal.csv";
        std::ofstream out = detail::open_output(path);
        out << "nbar,c_fig1,c_fig2\n";
        const std::size_t count = 241;
        for (std::size_t k = 0; k < count; ++k) {
            const double nbar =
                upper * static_cast<double>(k) / static_cast<double>(count - 1);
            ModelParams p1 = detail::fig1_params;
            ModelParams p2 = detail::fig2_params;
            p1.nbar = nbar;
            p2.nbar = nbar;
            out << detail::format_g17(nbar) << ','
                << detail::format_g17(steady_concurrence_finite_t(p1)) << ','
                << detail::format_g17(steady_concurrence_finite_t(p2)) << '\n';
        }
        written.push_back(path);
    }

    for (const std::string& path : written) status << "wrote " << path << '\n';
    return written;
}

}  // namespace xyconc
