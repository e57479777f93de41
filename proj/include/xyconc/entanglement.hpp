#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "xyconc/eigen.hpp"
#include "xyconc/errors.hpp"
#include "xyconc/matrix.hpp"
#include "xyconc/model.hpp"

// Wootters concurrence and coherence diagnostics for two-qubit states.

namespace xyconc {

// lambdas: eigenvalues of rho rho_tilde, descending, clamped non-negative.
// c1/c2 are the closed-form branches, present only on the X-pattern path.
// c = max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)) = max(0, c1, c2).
struct ConcurrenceResult {
    std::array<double, 4> lambdas{};
    std::optional<double> c1;
    std::optional<double> c2;
    double c = 0.0;
};

// sigma_y kron sigma_y: anti-diagonal (-1, 1, 1, -1).
inline ComplexMatrix<4> spin_flip_kernel() {
    ComplexMatrix<4> yy;
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    return yy;
}

// rho_tilde = (sigma_y kron sigma_y) conj(rho) (sigma_y kron sigma_y), with
// conjugation taken entrywise in the product basis.
inline ComplexMatrix<4> spin_flip(const ComplexMatrix<4>& rho) {
    const ComplexMatrix<4> yy = spin_flip_kernel();
    return yy * entrywise_conj(rho) * yy;
}

// True when every entry outside the diagonal and the anti-diagonal is below
// tol: the X pattern with populated (1,1), (2,2), (3,3), (4,4), (1,4), (2,3)
// blocks in 1-based labels.
inline bool has_x_pattern(const ComplexMatrix<4>& m, double tol = 1e-10) {
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (i != j && i + j != 3 && std::abs(m(i, j)) > tol) return false;
    return true;
}

namespace detail {

inline void sort_descending(std::array<double, 4>& a) {
    std::sort(a.begin(), a.end(), std::greater<double>());
}

inline double clamp_unit(double c) { return std::min(std::max(c, 0.0), 1.0); }

}  // namespace detail

// General Wootters construction. The non-Hermitian product rho rho_tilde is
// never eigendecomposed directly; sqrt(rho) rho_tilde sqrt(rho) has the same
// spectrum and is Hermitian PSD. Eigenvalues below 1e-13 of the largest are
// zeroed before the square roots: spectral roundoff of order machine epsilon
// would otherwise be amplified to sqrt(epsilon) on singular states.
inline ConcurrenceResult concurrence_general(const DensityMatrix& rho) {
    const HermitianEigen<4> rho_eig = hermitian_eigen(rho.matrix());
    ComplexMatrix<4> root;  // sqrt(rho), with the DensityMatrix negativity allowance clamped
    for (std::size_t k = 0; k < 4; ++k) {
        const double s = std::sqrt(std::max(rho_eig.values[k], 0.0));
        if (s == 0.0) continue;
        for (std::size_t i = 0; i < 4; ++i) {
            const cdouble vis = s * rho_eig.vectors(i, k);
            for (std::size_t j = 0; j < 4; ++j) root(i, j) += vis * std::conj(rho_eig.vectors(j, k));
        }
    }

    ComplexMatrix<4> m = root * spin_flip(rho.matrix()) * root;
    m = (m + adjoint(m)) * cdouble(0.5);
    const HermitianEigen<4> m_eig = hermitian_eigen(m);
    if (m_eig.values[0] < -1e-10)
        throw numeric_error("concurrence_general: spin-flip spectrum has eigenvalue " +
                            detail::num_str(m_eig.values[0]));

    ConcurrenceResult out;
    const double floor = 1e-13 * std::max(m_eig.values[3], 0.0);
    for (std::size_t k = 0; k < 4; ++k) {
        const double lam = m_eig.values[k];
        out.lambdas[k] = lam < floor ? 0.0 : lam;
    }
    detail::sort_descending(out.lambdas);
    const double diff = std::sqrt(out.lambdas[0]) - std::sqrt(out.lambdas[1]) -
                        std::sqrt(out.lambdas[2]) - std::sqrt(out.lambdas[3]);
    out.c = detail::clamp_unit(diff);
    return out;
}

// Closed form for X-pattern states:
//   C1 = 2 (|rho41| - sqrt(rho33 rho22)), C2 = 2 (|rho32| - sqrt(rho44 rho11)),
//   C = max(0, C1, C2).
// The spin-flip eigenvalues factor into (a +- b)^2 and (d +- e)^2 with
// a = sqrt(rho11 rho44), b = |rho14|, d = sqrt(rho22 rho33), e = |rho23|.
inline ConcurrenceResult concurrence_x_form(const DensityMatrix& rho) {
    const ComplexMatrix<4>& m = rho.matrix();
    static constexpr std::array<std::array<std::size_t, 2>, 4> forbidden = {
        {{0, 1}, {0, 2}, {1, 3}, {2, 3}}};
    for (const auto& [i, j] : forbidden) {
        const double mag = std::max(std::abs(m(i, j)), std::abs(m(j, i)));
        if (mag > 1e-10)
            throw std::domain_error("concurrence_x_form: entry rho" + std::to_string(i + 1) +
                                    std::to_string(j + 1) + " breaks the X pattern (magnitude " +
                                    detail::num_str(mag) + ")");
    }

    const double p11 = std::max(m(0, 0).real(), 0.0);
    const double p22 = std::max(m(1, 1).real(), 0.0);
    const double p33 = std::max(m(2, 2).real(), 0.0);
    const double p44 = std::max(m(3, 3).real(), 0.0);
    const double a = std::sqrt(p11 * p44);
    const double b = std::abs(m(0, 3));
    const double d = std::sqrt(p22 * p33);
    const double e = std::abs(m(1, 2));

    ConcurrenceResult out;
    out.c1 = 2.0 * (b - d);
    out.c2 = 2.0 * (e - a);
    out.lambdas = {(a + b) * (a + b), (a - b) * (a - b), (d + e) * (d + e), (d - e) * (d - e)};
    detail::sort_descending(out.lambdas);
    out.c = detail::clamp_unit(std::max(*out.c1, *out.c2));
    return out;
}

// Dispatch: the closed form when the X pattern holds, the general
// construction otherwise.
inline ConcurrenceResult concurrence(const DensityMatrix& rho) {
    return has_x_pattern(rho.matrix()) ? concurrence_x_form(rho) : concurrence_general(rho);
}

enum class Qubit { a, b };

// Reduced single-qubit state, basis (|e>, |g|). Qubit a is the first factor
// of the product basis.
inline ComplexMatrix<2> partial_trace(const DensityMatrix& rho, Qubit keep) {
    const ComplexMatrix<4>& m = rho.matrix();
    ComplexMatrix<2> out;
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) {
            cdouble s = 0.0;
            for (std::size_t t = 0; t < 2; ++t)
                s += keep == Qubit::a ? m(2 * r + t, 2 * c + t) : m(2 * t + r, 2 * t + c);
            out(r, c) = s;
        }
    return out;
}

// Local (single-qubit) versus global (two-qubit) coherence: the reduced
// matrices with their largest off-diagonal magnitudes, and the two entries of
// the joint state that can carry coherence in the X pattern.
struct CoherenceReport {
    ComplexMatrix<2> reduced_a;
    ComplexMatrix<2> reduced_b;
    double local_coherence_a = 0.0;
    double local_coherence_b = 0.0;
    cdouble global_14;
    cdouble global_23;
};

inline CoherenceReport coherence_report(const DensityMatrix& rho) {
    CoherenceReport r;
    r.reduced_a = partial_trace(rho, Qubit::a);
    r.reduced_b = partial_trace(rho, Qubit::b);
    r.local_coherence_a = std::max(std::abs(r.reduced_a(0, 1)), std::abs(r.reduced_a(1, 0)));
    r.local_coherence_b = std::max(std::abs(r.reduced_b(0, 1)), std::abs(r.reduced_b(1, 0)));
    r.global_14 = rho(0, 3);
    r.global_23 = rho(1, 2);
    return r;
}

}  // namespace xyconc
