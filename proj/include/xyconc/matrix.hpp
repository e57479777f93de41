#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace xyconc {

using cdouble = std::complex<double>;

// Dense square complex matrix of fixed small dimension, row-major storage.
// The only sizes in use are 2 (single qubit), 4 (two-qubit operators and
// states) and 16 (superoperators acting on vectorized 4x4 matrices).
template <std::size_t N>
struct ComplexMatrix {
    static_assert(N == 2 || N == 4 || N == 16, "supported dimensions are 2, 4 and 16");

    static constexpr std::size_t dim = N;

    std::array<cdouble, N * N> e{};

    cdouble& operator()(std::size_t i, std::size_t j) { return e[i * N + j]; }
    const cdouble& operator()(std::size_t i, std::size_t j) const { return e[i * N + j]; }

    static ComplexMatrix zero() { return {}; }

    static ComplexMatrix identity() {
        ComplexMatrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        for (std::size_t k = 0; k < N * N; ++k) e[k] += o.e[k];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        for (std::size_t k = 0; k < N * N; ++k) e[k] -= o.e[k];
        return *this;
    }
    ComplexMatrix& operator*=(cdouble s) {
        for (auto& v : e) v *= s;
        return *this;
    }
};

template <std::size_t N>
ComplexMatrix<N> operator+(ComplexMatrix<N> a, const ComplexMatrix<N>& b) {
    return a += b;
}

template <std::size_t N>
ComplexMatrix<N> operator-(ComplexMatrix<N> a, const ComplexMatrix<N>& b) {
    return a -= b;
}

template <std::size_t N>
ComplexMatrix<N> operator-(ComplexMatrix<N> a) {
    return a *= -1.0;
}

template <std::size_t N>
ComplexMatrix<N> operator*(ComplexMatrix<N> a, cdouble s) {
    return a *= s;
}

template <std::size_t N>
ComplexMatrix<N> operator*(cdouble s, ComplexMatrix<N> a) {
    return a *= s;
}

template <std::size_t N>
ComplexMatrix<N> operator*(const ComplexMatrix<N>& a, const ComplexMatrix<N>& b) {
    ComplexMatrix<N> out;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < N; ++k) {
            const cdouble aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < N; ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

template <std::size_t N>
ComplexMatrix<N> adjoint(const ComplexMatrix<N>& a) {
    ComplexMatrix<N> out;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) out(i, j) = std::conj(a(j, i));
    return out;
}

template <std::size_t N>
ComplexMatrix<N> transpose(const ComplexMatrix<N>& a) {
    ComplexMatrix<N> out;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) out(i, j) = a(j, i);
    return out;
}

template <std::size_t N>
ComplexMatrix<N> entrywise_conj(const ComplexMatrix<N>& a) {
    ComplexMatrix<N> out;
    for (std::size_t k = 0; k < N * N; ++k) out.e[k] = std::conj(a.e[k]);
    return out;
}

template <std::size_t N>
cdouble trace(const ComplexMatrix<N>& a) {
    cdouble t = 0.0;
    for (std::size_t i = 0; i < N; ++i) t += a(i, i);
    return t;
}

template <std::size_t N>
double max_abs(const ComplexMatrix<N>& a) {
    double m = 0.0;
    for (const auto& v : a.e) m = std::max(m, std::abs(v));
    return m;
}

template <std::size_t N>
double max_abs_diff(const ComplexMatrix<N>& a, const ComplexMatrix<N>& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < N * N; ++k) m = std::max(m, std::abs(a.e[k] - b.e[k]));
    return m;
}

template <std::size_t N>
double frobenius_norm(const ComplexMatrix<N>& a) {
    double s = 0.0;
    for (const auto& v : a.e) s += std::norm(v);
    return std::sqrt(s);
}

// Largest deviation from A = A^dagger, measured entrywise.
template <std::size_t N>
double hermitian_defect(const ComplexMatrix<N>& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i; j < N; ++j)
            m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
    return m;
}

template <std::size_t N>
bool is_finite(const ComplexMatrix<N>& a) {
    for (const auto& v : a.e)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

// Kronecker product in the convention that the first factor indexes the
// slower-varying subsystem (qubit 1 of |q1 q2>).
template <std::size_t A, std::size_t B>
ComplexMatrix<A * B> kron(const ComplexMatrix<A>& a, const ComplexMatrix<B>& b) {
    static_assert(A * B == 4 || A * B == 16, "kron output dimension must be 4 or 16");
    ComplexMatrix<A * B> out;
    for (std::size_t i1 = 0; i1 < A; ++i1)
        for (std::size_t j1 = 0; j1 < A; ++j1) {
            const cdouble f = a(i1, j1);
            if (f == 0.0) continue;
            for (std::size_t i2 = 0; i2 < B; ++i2)
                for (std::size_t j2 = 0; j2 < B; ++j2)
                    out(i1 * B + i2, j1 * B + j2) = f * b(i2, j2);
        }
    return out;
}

}  // namespace xyconc
