#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

#include "xyconc/errors.hpp"
#include "xyconc/matrix.hpp"

namespace xyconc {

template <std::size_t N>
struct LinearSolution {
    std::array<cdouble, N> x{};
    double residual = 0.0;  // max |a x - rhs| entry, computed on the original system
};

// Gaussian elimination with partial pivoting. Sized for the 16x16 steady-state
// system but dimension-generic. Pivots below 1e-13 of the largest input entry
// indicate a (numerically) singular system.
template <std::size_t N>
LinearSolution<N> solve_linear(const ComplexMatrix<N>& a, const std::array<cdouble, N>& rhs) {
    ComplexMatrix<N> m = a;
    std::array<cdouble, N> b = rhs;
    const double scale = max_abs(a);

    for (std::size_t k = 0; k < N; ++k) {
        std::size_t piv = k;
        double best = std::abs(m(k, k));
        for (std::size_t i = k + 1; i < N; ++i) {
            const double cand = std::abs(m(i, k));
            if (cand > best) {
                best = cand;
                piv = i;
            }
        }
        if (!(best >= 1e-13 * scale))
            throw numeric_error("solve_linear: singular system (pivot " + detail::num_str(best) +
                                " against scale " + detail::num_str(scale) + ")");
        if (piv != k) {
            for (std::size_t j = 0; j < N; ++j) std::swap(m(k, j), m(piv, j));
            std::swap(b[k], b[piv]);
        }
        for (std::size_t i = k + 1; i < N; ++i) {
            const cdouble f = m(i, k) / m(k, k);
            if (f == 0.0) continue;
            m(i, k) = 0.0;
            for (std::size_t j = k + 1; j < N; ++j) m(i, j) -= f * m(k, j);
            b[i] -= f * b[k];
        }
    }

    LinearSolution<N> out;
    for (std::size_t ii = N; ii-- > 0;) {
        cdouble s = b[ii];
        for (std::size_t j = ii + 1; j < N; ++j) s -= m(ii, j) * out.x[j];
        out.x[ii] = s / m(ii, ii);
    }

    for (std::size_t i = 0; i < N; ++i) {
        cdouble s = -rhs[i];
        for (std::size_t j = 0; j < N; ++j) s += a(i, j) * out.x[j];
        out.residual = std::max(out.residual, std::abs(s));
    }
    return out;
}

}  // namespace xyconc
