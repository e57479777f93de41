#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "xyconc/entanglement.hpp"
#include "xyconc/errors.hpp"
#include "xyconc/matrix.hpp"
#include "xyconc/model.hpp"
#include "xyconc/solve.hpp"

// Master-equation time integration and steady-state computation.

namespace xyconc {

// Zero-valued dt, t_max and convergence_window request the defaults: the
// step-size bound, 30/gamma and 5/gamma respectively.
struct IntegratorConfig {
    double dt = 0.0;
    double t_max = 0.0;
    std::size_t record_stride = 1;
    double convergence_tol = 1e-9;
    double convergence_window = 0.0;
    bool stop_on_convergence = false;

    // Fixed-step bound keeping the phase error of the 2 Omega oscillation
    // small: 0.05 min(1/gamma, 1/Omega, 1/|j|).
    static double max_step(const ModelParams& p) {
        const double om = std::hypot(p.omega, p.delta);
        double limit = 1.0 / p.gamma;
        if (om > 0.0) limit = std::min(limit, 1.0 / om);
        limit = std::min(limit, 1.0 / std::max(std::abs(p.j), 1e-12));
        return 0.05 * limit;
    }

    // Default step: like the bound, but tracking the full thermal rate
    // gamma (1 + 2 nbar), which dominates stiffness at large occupation, and
    // with a smaller prefactor. At 0.05 the truncation error out of a pure
    // initial state can push an eigenvalue just past the -1e-8 validation
    // floor; 0.02 keeps the whole trajectory well inside it.
    static double default_step(const ModelParams& p) {
        const double om = std::hypot(p.omega, p.delta);
        double limit = 1.0 / (p.gamma * (1.0 + 2.0 * p.nbar));
        if (om > 0.0) limit = std::min(limit, 1.0 / om);
        limit = std::min(limit, 1.0 / std::max(std::abs(p.j), 1e-12));
        return 0.02 * limit;
    }

    IntegratorConfig resolved(const ModelParams& p) const {
        validate_params(p);
        IntegratorConfig c = *this;
        const double bound = max_step(p);
        if (c.dt == 0.0) c.dt = default_step(p);
        if (c.t_max == 0.0) c.t_max = 30.0 / p.gamma;
        if (c.convergence_window == 0.0) c.convergence_window = 5.0 / p.gamma;
        if (!(c.dt > 0.0) || !(c.t_max > 0.0))
            throw std::invalid_argument("integrator step and horizon must be positive");
        if (c.dt > bound * (1.0 + 1e-12))
            throw std::invalid_argument("integrator step " + detail::num_str(c.dt) +
                                        " exceeds the stability bound " + detail::num_str(bound));
        if (c.record_stride == 0)
            throw std::invalid_argument("record stride must be at least 1");
        if (!(c.convergence_tol > 0.0) || !(c.convergence_window > 0.0))
            throw std::invalid_argument("convergence tolerance and window must be positive");
        return c;
    }
};

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    std::vector<double> concurrences;
    std::optional<double> converged_at;
    double max_step_correction = 0.0;  // largest per-step symmetrize/renormalize adjustment
    double final_drift = 0.0;          // last windowed max-entry change observed
};

enum class SteadyMethod { nullspace, longtime, analytic };

inline const char* to_string(SteadyMethod m) {
    switch (m) {
        case SteadyMethod::nullspace: return "nullspace";
        case SteadyMethod::longtime: return "longtime";
        case SteadyMethod::analytic: return "analytic";
    }
    return "?";
}

struct SteadyStateResult {
    DensityMatrix rho;
    SteadyMethod method;
    double residual = 0.0;  // max entry of the generator applied to rho
};

namespace detail {

struct ConvergenceTracker {
    double window;
    double tol;
    std::deque<std::pair<double, ComplexMatrix<4>>> buffer;
    double last_drift = 0.0;

    // Compares the current state against the recorded state one window ago;
    // the drift of the density matrix (not of the concurrence, which is
    // clamped and can sit at zero transiently) decides convergence.
    bool update(double t, const ComplexMatrix<4>& m) {
        buffer.emplace_back(t, m);
        while (buffer.size() >= 2 && buffer[1].first <= t - window) buffer.pop_front();
        if (buffer.front().first > t - window) return false;
        last_drift = max_abs_diff(m, buffer.front().second);
        return last_drift < tol;
    }
};

}  // namespace detail

// Classical fixed-step fourth-order Runge-Kutta on the 16 complex components.
// After each step the state is symmetrized and trace-renormalized; those
// corrections are pure roundoff for a correct run, so anything above 1e-9 per
// step aborts rather than silently integrating garbage.
inline Trajectory integrate(const ModelParams& p, const DensityMatrix& rho0,
                            const IntegratorConfig& config) {
    const IntegratorConfig cfg = config.resolved(p);
    const MasterOperator op(p);

    const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_max / cfg.dt));
    if (n_steps == 0) throw std::invalid_argument("integration horizon shorter than one step");

    Trajectory traj;
    detail::ConvergenceTracker tracker{cfg.convergence_window, cfg.convergence_tol, {}, 0.0};

    ComplexMatrix<4> y = rho0.matrix();
    const double dt = cfg.dt;

    const auto record = [&](std::size_t step_index, const ComplexMatrix<4>& m) -> bool {
        const double t = static_cast<double>(step_index) * dt;
        try {
            DensityMatrix state(m);
            traj.concurrences.push_back(concurrence(state).c);
            traj.states.push_back(std::move(state));
        } catch (const std::domain_error& err) {
            throw numeric_error("integration produced an invalid state at t = " +
                                detail::num_str(t) + " (" + err.what() + "); decrease dt");
        }
        traj.times.push_back(t);
        if (!traj.converged_at && tracker.update(t, m)) traj.converged_at = t;
        traj.final_drift = tracker.last_drift;
        return traj.converged_at && cfg.stop_on_convergence;
    };

    if (record(0, y)) return traj;

    for (std::size_t step = 1; step <= n_steps; ++step) {
        const ComplexMatrix<4> k1 = op.apply(y);
        const ComplexMatrix<4> k2 = op.apply(y + cdouble(0.5 * dt) * k1);
        const ComplexMatrix<4> k3 = op.apply(y + cdouble(0.5 * dt) * k2);
        const ComplexMatrix<4> k4 = op.apply(y + cdouble(dt) * k3);
        y += cdouble(dt / 6.0) *
             (k1 + cdouble(2.0) * k2 + cdouble(2.0) * k3 + k4);

        const ComplexMatrix<4> sym = (y + adjoint(y)) * cdouble(0.5);
        const double sym_correction = max_abs_diff(sym, y);
        const double tr = trace(sym).real();
        const double trace_correction = std::abs(tr - 1.0);
        const double correction = std::max(sym_correction, trace_correction);
        if (!(correction <= 1e-9))
            throw numeric_error("per-step correction " + detail::num_str(correction) +
                                " at t = " + detail::num_str(static_cast<double>(step) * dt) +
                                " exceeds 1e-9; decrease dt");
        traj.max_step_correction = std::max(traj.max_step_correction, correction);
        y = sym * cdouble(1.0 / tr);

        const bool at_stride = step % cfg.record_stride == 0;
        if (at_stride || step == n_steps) {
            if (record(step, y)) break;
        }
    }
    return traj;
}

// Steady state as the null space of the generator: the first row of
// L vec(rho) = 0 is replaced by the trace normalization tr(rho) = 1. That row
// is linearly dependent on the others (the generator is trace-preserving), so
// the replacement leaves a nonsingular system for gamma > 0.
inline SteadyStateResult steady_state_nullspace(const ModelParams& p) {
    ComplexMatrix<16> l = liouvillian_superoperator(p);
    std::array<cdouble, 16> rhs{};
    rhs[0] = 1.0;
    for (std::size_t col = 0; col < 16; ++col) l(0, col) = 0.0;
    for (std::size_t i = 0; i < 4; ++i) l(0, vec_index(i, i)) = 1.0;

    const LinearSolution<16> sol = solve_linear(l, rhs);
    ComplexMatrix<4> m = unvec(sol.x);
    m = (m + adjoint(m)) * cdouble(0.5);
    m = m * cdouble(1.0 / trace(m).real());

    const double residual = max_abs(master_rhs(p, m));
    // The solve's attainable residual scales with the generator's magnitude,
    // which the rates dominate at large occupation.
    const double scale =
        p.gamma * (1.0 + 2.0 * p.nbar) + std::abs(p.omega) + std::abs(p.delta) + std::abs(p.j);
    if (!(residual < 1e-8 * std::max(1.0, scale)))
        throw numeric_error("nullspace steady state residual " + detail::num_str(residual) +
                            " is above tolerance");
    return SteadyStateResult{DensityMatrix(m), SteadyMethod::nullspace, residual};
}

// Steady state by integrating until the windowed drift criterion fires.
inline SteadyStateResult steady_state_longtime(const ModelParams& p, const DensityMatrix& rho0,
                                               const IntegratorConfig& config) {
    IntegratorConfig cfg = config.resolved(p);
    if (!(cfg.t_max >= 20.0 / p.gamma))
        throw std::invalid_argument("long-time steady-state search needs t_max >= 20/gamma");
    cfg.stop_on_convergence = true;

    const Trajectory traj = integrate(p, rho0, cfg);
    if (!traj.converged_at)
        throw numeric_error("no steady state by t = " + detail::num_str(cfg.t_max) +
                            " (final windowed drift " + detail::num_str(traj.final_drift) + ")");

    const DensityMatrix& rho = traj.states.back();
    const double residual = max_abs(master_rhs(p, rho.matrix()));
    if (!(residual < 1e-8))
        throw numeric_error("long-time steady state residual " + detail::num_str(residual) +
                            " is above 1e-8");
    return SteadyStateResult{rho, SteadyMethod::longtime, residual};
}

// Basis change between the product basis and the energy eigenbasis:
// rho_bar = U^dagger rho U with the eigenstates as the columns of U.
inline ComplexMatrix<4> transform_to_eigenbasis(const ModelParams& p, const ComplexMatrix<4>& rho) {
    const ComplexMatrix<4> u = eigenbasis(p).to_product();
    return adjoint(u) * rho * u;
}

inline ComplexMatrix<4> transform_to_eigenbasis(const ModelParams& p, const DensityMatrix& rho) {
    return transform_to_eigenbasis(p, rho.matrix());
}

inline ComplexMatrix<4> transform_from_eigenbasis(const ModelParams& p,
                                                  const ComplexMatrix<4>& rho_bar) {
    const ComplexMatrix<4> u = eigenbasis(p).to_product();
    return u * rho_bar * adjoint(u);
}

}  // namespace xyconc
