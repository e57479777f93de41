#include <cstdio>

#include "xyconc/xyconc.hpp"

// Integrates the master equation from |gg> at the weak-anisotropy parameter
// set and prints the concurrence as it climbs to its steady value.

int main() {
    xyconc::ModelParams p;
    p.omega = 1.0;
    p.j = 0.1;
    p.delta = 0.1;
    p.gamma = 0.3;

    xyconc::IntegratorConfig cfg;
    cfg.t_max = 30.0 / p.gamma;
    cfg.stop_on_convergence = true;

    const xyconc::Trajectory traj =
        xyconc::integrate(p, xyconc::named_initial_state("gg"), cfg);

    std::printf("%8s  %12s\n", "gamma t", "C");
    const std::size_t rows = 15;
    for (std::size_t k = 0; k < rows; ++k) {
        const std::size_t idx = k * (traj.times.size() - 1) / (rows - 1);
        std::printf("%8.3f  %12.8f\n", p.gamma * traj.times[idx], traj.concurrences[idx]);
    }
    if (traj.converged_at)
        std::printf("converged at gamma t = %.3f\n", p.gamma * *traj.converged_at);

    const double closed_form = xyconc::steady_concurrence_t0(p);
    std::printf("closed-form steady C = %.8f\n", closed_form);
    return 0;
}
