#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "xyconc/entanglement.hpp"
#include "xyconc/errors.hpp"
#include "xyconc/matrix.hpp"
#include "xyconc/model.hpp"

// Closed-form results: the zero-temperature trajectory from |gg>, the steady
// states at zero and finite temperature, the steady concurrence, and the
// optimizing anisotropy.

namespace xyconc {

enum class SteadyRegime { zero_temperature, finite_temperature };

struct AnalyticSteadyState {
    DensityMatrix rho;
    SteadyRegime regime;
};

struct OptimumReport {
    double delta_max = 0.0;
    double c_at_optimum = 0.0;
    bool positivity_bound_ok = false;
};

namespace detail {

inline void require_zero_temperature(const ModelParams& p, const char* what) {
    if (p.nbar != 0.0)
        throw std::domain_error(std::string(what) + " is a zero-temperature result; nbar = " +
                                num_str(p.nbar));
}

inline void check_stationary(const ModelParams& p, const ComplexMatrix<4>& rho) {
    const double residual = max_abs(master_rhs(p, rho));
    // The generator's entries grow with the rates, and so does the roundoff
    // floor of a cancellation to zero; the gate follows that scale instead of
    // rejecting exact results at extreme occupations.
    const double scale =
        p.gamma * (1.0 + 2.0 * p.nbar) + std::abs(p.omega) + std::abs(p.delta);
    if (!(residual < 1e-10 * std::max(1.0, scale)))
        throw numeric_error("closed-form steady state is not stationary (residual " +
                            num_str(residual) + ")");
}

// Scalar steady concurrence in scaled variables, without the clamp at zero.
// Negative values signal the separable region and carry the sign information
// the root finder needs.
inline double steady_concurrence_raw(double omega_bar, double delta_bar, double nbar) {
    const double u = (1.0 + 2.0 * nbar) * (1.0 + 2.0 * nbar);
    const double w4 = 4.0 * omega_bar * omega_bar;
    const double d = w4 + u + 4.0 * delta_bar * delta_bar;
    return 2.0 * std::sqrt(delta_bar * delta_bar * (w4 + u)) / ((1.0 + 2.0 * nbar) * d) -
           0.5 + (w4 + u) / (2.0 * u * d);
}

}  // namespace detail

// Trajectory from |gg> at zero temperature, expressed in the energy
// eigenbasis. The Delta = 0 case is excluded: the expressions degenerate with
// the eigenbasis itself, and the integrator covers that regime.
inline ComplexMatrix<4> analytic_trajectory_gg(const ModelParams& p, double t) {
    validate_params(p);
    detail::require_zero_temperature(p, "the closed-form trajectory");
    if (p.delta == 0.0)
        throw std::domain_error("the closed-form trajectory requires a nonzero anisotropy");
    if (!(t >= 0.0)) throw std::invalid_argument("time must be non-negative");

    const DerivedParams d = derive(p);
    const double om = d.omega_big;
    const double g = p.gamma;
    const double dl = p.delta;
    const double alpha = d.alpha;
    const double d2 = dl * dl;

    const double e1 = std::exp(-g * t);
    const double e2 = std::exp(-2.0 * g * t);
    const double s = std::sin(2.0 * om * t);
    const double c = std::cos(2.0 * om * t);

    const double r11 = (-p.omega * alpha + 2.0 * om * d2 * e2 + om * (alpha - 2.0 * d2) +
                        2.0 * e1 * d2 * g * s) /
                       (2.0 * om * alpha);
    const double r22 = d2 * (om - om * e2 - e1 * g * s) / (om * alpha);
    const double r44 = 1.0 - r11 - 2.0 * r22;
    const cdouble r14 = dl * cdouble(2.0 * om * e1 * s + g, 2.0 * om * e1 * c) /
                        cdouble(2.0 * om * g, 4.0 * om * om);

    ComplexMatrix<4> rho;
    rho(0, 0) = r11;
    rho(1, 1) = r22;
    rho(2, 2) = r22;
    rho(3, 3) = r44;
    rho(0, 3) = r14;
    rho(3, 0) = std::conj(r14);
    return rho;
}

inline AnalyticSteadyState steady_state_t0(const ModelParams& p) {
    validate_params(p);
    detail::require_zero_temperature(p, "the zero-temperature steady state");

    const DerivedParams d = derive(p);
    const double pop = p.delta * p.delta / d.alpha;
    const cdouble r14 =
        cdouble(-2.0 * p.omega * p.delta, -p.delta * p.gamma) * (1.0 / d.alpha);

    ComplexMatrix<4> rho;
    rho(0, 0) = pop;
    rho(1, 1) = pop;
    rho(2, 2) = pop;
    rho(3, 3) = 1.0 - 3.0 * pop;
    rho(0, 3) = r14;
    rho(3, 0) = std::conj(r14);

    detail::check_stationary(p, rho);
    return AnalyticSteadyState{DensityMatrix(rho), SteadyRegime::zero_temperature};
}

inline double steady_concurrence_t0(const ModelParams& p) {
    validate_params(p);
    detail::require_zero_temperature(p, "the zero-temperature steady concurrence");
    const DerivedParams d = derive(p);
    const double d2 = p.delta * p.delta;
    const double raw =
        (2.0 * std::sqrt(d2 * (4.0 * p.omega * p.omega + p.gamma * p.gamma)) - 2.0 * d2) /
        d.alpha;
    return std::max(raw, 0.0);
}

// Anisotropy maximizing the zero-temperature steady concurrence at fixed
// omega and gamma.
inline double delta_max(double omega, double gamma) {
    if (!std::isfinite(omega) || !(gamma > 0.0))
        throw std::invalid_argument("delta_max needs finite omega and positive gamma");
    return std::hypot(2.0 * omega, gamma) / (1.0 + std::sqrt(5.0));
}

// Parameter-independent value of the steady concurrence on the optimizing
// ridge.
inline double global_max_concurrence() { return 1.0 / (1.0 + std::sqrt(5.0)); }

inline OptimumReport optimum_for(double omega, double gamma) {
    OptimumReport report;
    report.delta_max = delta_max(omega, gamma);
    report.c_at_optimum =
        steady_concurrence_t0(ModelParams{omega, 0.0, report.delta_max, gamma, 0.0});
    report.positivity_bound_ok =
        4.0 * omega * omega + gamma * gamma >= report.delta_max * report.delta_max;
    return report;
}

inline AnalyticSteadyState steady_state_finite_t(const ModelParams& p) {
    validate_params(p);
    const DerivedParams d = derive(p);
    const double ob = d.omega_bar;
    const double db = d.delta_bar;
    const double nb = p.nbar;

    const double u = (1.0 + 2.0 * nb) * (1.0 + 2.0 * nb);
    const double w4 = 4.0 * ob * ob;
    const double denom = w4 + u + 4.0 * db * db;

    const double r11 = (nb * nb * (w4 + u) + db * db * u) / (u * denom);
    const double r22 = 0.25 * (1.0 - (w4 + u) / (u * denom));
    const double r44 = (w4 * (1.0 + nb) * (1.0 + nb) +
                        u * ((1.0 + nb) * (1.0 + nb) + db * db)) /
                       (u * denom);
    const cdouble r14 =
        -db * cdouble(2.0 * ob, 1.0 + 2.0 * nb) * (1.0 / ((1.0 + 2.0 * nb) * denom));

    ComplexMatrix<4> rho;
    rho(0, 0) = r11;
    rho(1, 1) = r22;
    rho(2, 2) = r22;
    rho(3, 3) = r44;
    rho(0, 3) = r14;
    rho(3, 0) = std::conj(r14);

    detail::check_stationary(p, rho);
    return AnalyticSteadyState{DensityMatrix(rho),
                               nb == 0.0 ? SteadyRegime::zero_temperature
                                         : SteadyRegime::finite_temperature};
}

inline double steady_concurrence_finite_t(const ModelParams& p) {
    validate_params(p);
    const DerivedParams d = derive(p);
    return std::max(detail::steady_concurrence_raw(d.omega_bar, d.delta_bar, p.nbar), 0.0);
}

// Mean occupation at which the steady concurrence first vanishes, found by
// bisection on the unclamped scalar form.
inline double vanishing_temperature(const ModelParams& p) {
    validate_params(p);
    const DerivedParams d = derive(p);
    const double at_zero = detail::steady_concurrence_raw(d.omega_bar, d.delta_bar, 0.0);
    if (!(at_zero > 0.0))
        throw std::domain_error("steady concurrence is already zero at nbar = 0");

    double lo = 0.0;
    double hi = 0.01;
    while (detail::steady_concurrence_raw(d.omega_bar, d.delta_bar, hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e3)
            throw numeric_error("steady concurrence stays positive up to nbar = 1e3");
    }
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (detail::steady_concurrence_raw(d.omega_bar, d.delta_bar, mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace xyconc
