#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

#include "xyconc/errors.hpp"
#include "xyconc/matrix.hpp"

namespace xyconc {

// Eigenvalues ascending; columns of `vectors` are the matching orthonormal
// eigenvectors, so A = V diag(values) V^dagger.
template <std::size_t N>
struct HermitianEigen {
    std::array<double, N> values{};
    ComplexMatrix<N> vectors;
};

namespace detail {

template <std::size_t N>
double off_diagonal_frobenius(const ComplexMatrix<N>& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// One unitary plane rotation G in the (p, q) plane chosen to annihilate
// a(p, q); applies a <- G^dagger a G and accumulates v <- v G. The rotation
// angle solves t^2 - 2 theta t - 1 = 0 for its smaller root, which keeps the
// per-rotation transformation well conditioned.
template <std::size_t N>
void jacobi_rotate(ComplexMatrix<N>& a, ComplexMatrix<N>& v, std::size_t p, std::size_t q) {
    const cdouble apq = a(p, q);
    const double r = std::abs(apq);
    if (r == 0.0) return;
    const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
    const double t = -1.0 / (theta + std::copysign(std::sqrt(theta * theta + 1.0), theta));
    if (!std::isfinite(t)) return;  // pivot negligible relative to the diagonal gap
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const cdouble s = (t * c) * (std::conj(apq) / r);

    for (std::size_t i = 0; i < N; ++i) {
        const cdouble aip = a(i, p), aiq = a(i, q);
        a(i, p) = c * aip + s * aiq;
        a(i, q) = -std::conj(s) * aip + c * aiq;
    }
    for (std::size_t j = 0; j < N; ++j) {
        const cdouble apj = a(p, j), aqj = a(q, j);
        a(p, j) = c * apj + std::conj(s) * aqj;
        a(q, j) = -s * apj + c * aqj;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const cdouble vip = v(i, p), viq = v(i, q);
        v(i, p) = c * vip + s * viq;
        v(i, q) = -std::conj(s) * vip + c * viq;
    }
}

}  // namespace detail

// Cyclic Jacobi eigensolver for Hermitian matrices. The input may carry up to
// 1e-10 of entrywise asymmetry (integration roundoff); it is symmetrized as
// (a + a^dagger)/2 before solving. Larger asymmetry is a caller bug.
template <std::size_t N>
HermitianEigen<N> hermitian_eigen(const ComplexMatrix<N>& input) {
    const double defect = hermitian_defect(input);
    if (!(defect <= 1e-10))
        throw std::domain_error("hermitian_eigen: matrix is not Hermitian (max asymmetry " +
                                detail::num_str(defect) + ")");

    ComplexMatrix<N> a = (input + adjoint(input)) * cdouble(0.5);
    ComplexMatrix<N> v = ComplexMatrix<N>::identity();
    const double norm_f = frobenius_norm(a);

    bool converged = false;
    double off = 0.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        off = detail::off_diagonal_frobenius(a);
        if (off == 0.0 || off < 1e-14 * norm_f) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) detail::jacobi_rotate(a, v, p, q);
    }
    if (!converged)
        throw numeric_error("hermitian_eigen: no convergence after 100 sweeps (off-diagonal residual " +
                            detail::num_str(off) + ")");

    HermitianEigen<N> out;
    out.vectors = v;
    for (std::size_t i = 0; i < N; ++i) out.values[i] = a(i, i).real();

    // Sort ascending, carrying eigenvector columns along.
    for (std::size_t i = 0; i + 1 < N; ++i) {
        std::size_t lo = i;
        for (std::size_t k = i + 1; k < N; ++k)
            if (out.values[k] < out.values[lo]) lo = k;
        if (lo != i) {
            std::swap(out.values[i], out.values[lo]);
            for (std::size_t r = 0; r < N; ++r) std::swap(out.vectors(r, i), out.vectors(r, lo));
        }
    }
    return out;
}

// Hermitian PSD square root via eigendecomposition. Eigenvalues in
// [-1e-10, 0) are treated as roundoff and clamped to zero; anything lower is
// a genuine negativity and rejected.
template <std::size_t N>
ComplexMatrix<N> psd_sqrt(const ComplexMatrix<N>& a) {
    const HermitianEigen<N> eig = hermitian_eigen(a);
    if (eig.values[0] < -1e-10)
        throw std::domain_error("psd_sqrt: matrix is not positive semidefinite (eigenvalue " +
                                detail::num_str(eig.values[0]) + ")");
    ComplexMatrix<N> out;
    for (std::size_t k = 0; k < N; ++k) {
        const double s = std::sqrt(std::max(eig.values[k], 0.0));
        if (s == 0.0) continue;
        for (std::size_t i = 0; i < N; ++i) {
            const cdouble vis = s * eig.vectors(i, k);
            for (std::size_t j = 0; j < N; ++j) out(i, j) += vis * std::conj(eig.vectors(j, k));
        }
    }
    return out;
}

}  // namespace xyconc
