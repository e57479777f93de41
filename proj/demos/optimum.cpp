#include <cstdio>

#include "xyconc/xyconc.hpp"

// Scans the anisotropy at fixed omega and gamma, showing the steady
// concurrence peak at the closed-form optimum, and the thermal occupation at
// which the entanglement dies.

int main() {
    const double omega = 1.0;
    const double gamma = 0.458;

    std::printf("%8s  %12s\n", "delta", "steady C");
    for (int k = 0; k <= 12; ++k) {
        xyconc::ModelParams p;
        p.omega = omega;
        p.gamma = gamma;
        p.delta = 0.1 * static_cast<double>(k);
        std::printf("%8.2f  %12.8f\n", p.delta, xyconc::steady_concurrence_t0(p));
    }

    const xyconc::OptimumReport report = xyconc::optimum_for(omega, gamma);
    std::printf("optimal delta = %.8f, C there = %.8f (global bound %.8f)\n",
                report.delta_max, report.c_at_optimum, xyconc::global_max_concurrence());

    xyconc::ModelParams best;
    best.omega = omega;
    best.gamma = gamma;
    best.delta = report.delta_max;
    std::printf("entanglement vanishes at nbar = %.8f\n",
                xyconc::vanishing_temperature(best));
    return 0;
}
