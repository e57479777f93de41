#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "xyconc/eigen.hpp"
#include "xyconc/errors.hpp"
#include "xyconc/matrix.hpp"

// Two-qubit anisotropic XY exchange model with single-rate population
// relaxation into a thermal bath. All 4x4 objects use the fixed product-basis
// order |ee>, |eg>, |ge>, |gg> (indices 0..3); |e> is the upper level with
// S_z eigenvalue +1/2.

namespace xyconc {

struct ModelParams {
    double omega = 1.0;  // level splitting
    double j = 0.0;      // symmetric exchange coupling
    double delta = 0.0;  // anisotropic exchange coupling
    double gamma = 1.0;  // population relaxation rate, > 0
    double nbar = 0.0;   // mean thermal occupation of the bath, >= 0
};

inline void validate_params(const ModelParams& p) {
    if (!(std::isfinite(p.omega) && std::isfinite(p.j) && std::isfinite(p.delta) &&
          std::isfinite(p.gamma) && std::isfinite(p.nbar)))
        throw std::invalid_argument("model parameters must be finite");
    if (!(p.gamma > 0.0))
        throw std::invalid_argument("gamma must be positive (got " + detail::num_str(p.gamma) + ")");
    if (!(p.nbar >= 0.0))
        throw std::invalid_argument("nbar must be non-negative (got " + detail::num_str(p.nbar) + ")");
}

// Quantities derived from the raw parameters: the dressed splitting
// Omega = sqrt(omega^2 + delta^2), the decay-rate combination
// alpha = 4 Omega^2 + gamma^2, the eigenstate normalization factors N+/N-,
// and the rate-scaled (dimensionless) parameter values.
struct DerivedParams {
    double omega_big = 0.0;
    double alpha = 0.0;
    double n_plus = 0.0;
    double n_minus = 0.0;
    double omega_bar = 0.0;
    double delta_bar = 0.0;
    double omega_big_bar = 0.0;
};

inline DerivedParams derive(const ModelParams& p) {
    validate_params(p);
    DerivedParams d;
    d.omega_big = std::hypot(p.omega, p.delta);
    d.alpha = 4.0 * d.omega_big * d.omega_big + p.gamma * p.gamma;
    const double denom_plus = std::hypot(p.delta, d.omega_big - p.omega);
    const double denom_minus = std::hypot(p.delta, d.omega_big + p.omega);
    d.n_plus = denom_plus > 0.0 ? (d.omega_big - p.omega) / denom_plus : 0.0;
    d.n_minus = denom_minus > 0.0 ? (d.omega_big + p.omega) / denom_minus : 1.0;
    d.omega_bar = p.omega / p.gamma;
    d.delta_bar = p.delta / p.gamma;
    d.omega_big_bar = d.omega_big / p.gamma;
    return d;
}

// Validated two-qubit state: Hermitian within 1e-10, unit trace within 1e-10,
// eigenvalues above -1e-8.
class DensityMatrix {
  public:
    explicit DensityMatrix(const ComplexMatrix<4>& m) : m_(m) {
        if (!is_finite(m)) throw std::domain_error("density matrix has non-finite entries");
        const double defect = hermitian_defect(m);
        if (!(defect <= 1e-10))
            throw std::domain_error("density matrix is not Hermitian (max asymmetry " +
                                    detail::num_str(defect) + ")");
        const double trace_dev = std::abs(trace(m) - cdouble(1.0));
        if (!(trace_dev <= 1e-10))
            throw std::domain_error("density matrix trace deviates from 1 by " +
                                    detail::num_str(trace_dev));
        const double min_eig = hermitian_eigen(m).values[0];
        if (!(min_eig >= -1e-8))
            throw std::domain_error("density matrix is not positive semidefinite (min eigenvalue " +
                                    detail::num_str(min_eig) + ")");
    }

    const ComplexMatrix<4>& matrix() const { return m_; }
    cdouble operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  private:
    ComplexMatrix<4> m_;
};

// Normalized four-amplitude pure state in the product basis.
struct StateVector {
    std::array<cdouble, 4> v{};

    explicit StateVector(const std::array<cdouble, 4>& amplitudes) : v(amplitudes) {
        double n2 = 0.0;
        for (const auto& a : v) n2 += std::norm(a);
        const double dev = std::abs(std::sqrt(n2) - 1.0);
        if (!(dev <= 1e-12))
            throw std::invalid_argument("state vector norm deviates from 1 by " +
                                        detail::num_str(dev));
    }

    static StateVector normalized(std::array<cdouble, 4> amplitudes) {
        double n2 = 0.0;
        for (const auto& a : amplitudes) n2 += std::norm(a);
        if (n2 <= 0.0) throw std::invalid_argument("cannot normalize a zero state vector");
        const double inv = 1.0 / std::sqrt(n2);
        for (auto& a : amplitudes) a *= inv;
        return StateVector(amplitudes);
    }

    ComplexMatrix<4> projector() const {
        ComplexMatrix<4> m;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) m(i, j) = v[i] * std::conj(v[j]);
        return m;
    }
};

enum class SpinKind { plus, minus, z };

// Single-qubit raising/lowering/z operator embedded into the two-qubit space.
// S^- |e> = |g>, S^z |e> = +1/2 |e>.
inline ComplexMatrix<4> spin_operator(int qubit, SpinKind kind) {
    if (qubit != 1 && qubit != 2)
        throw std::invalid_argument("spin_operator: qubit index must be 1 or 2");
    ComplexMatrix<2> op;
    switch (kind) {
        case SpinKind::plus: op(0, 1) = 1.0; break;
        case SpinKind::minus: op(1, 0) = 1.0; break;
        case SpinKind::z:
            op(0, 0) = 0.5;
            op(1, 1) = -0.5;
            break;
    }
    const ComplexMatrix<2> id = ComplexMatrix<2>::identity();
    return qubit == 1 ? kron(op, id) : kron(id, op);
}

// H = omega (S1z + S2z) + j (S1+ S2- + S1- S2+) + delta (S1+ S2+ + S1- S2-).
// Couples |eg> <-> |ge> through j and |gg> <-> |ee> through delta.
inline ComplexMatrix<4> build_hamiltonian(const ModelParams& p) {
    validate_params(p);
    const auto s1p = spin_operator(1, SpinKind::plus);
    const auto s1m = spin_operator(1, SpinKind::minus);
    const auto s2p = spin_operator(2, SpinKind::plus);
    const auto s2m = spin_operator(2, SpinKind::minus);
    ComplexMatrix<4> h = cdouble(p.omega) * (spin_operator(1, SpinKind::z) + spin_operator(2, SpinKind::z));
    h += cdouble(p.j) * (s1p * s2m + s1m * s2p);
    h += cdouble(p.delta) * (s1p * s2p + s1m * s2m);
    return h;
}

// The four energy eigenstates, ordered by energy {+Omega, +j, -j, -Omega}.
// States 1 and 4 mix |ee> and |gg>; states 2 and 3 are the symmetric and
// antisymmetric combinations of |eg> and |ge>. At delta == 0 the mixing
// degenerates and the limit forms |ee>, |gg> are returned with a flag.
struct EigenBasis {
    std::array<StateVector, 4> states;
    std::array<double, 4> energies{};
    bool delta_limit = false;

    // Unitary whose columns are the eigenstates in the product basis.
    ComplexMatrix<4> to_product() const {
        ComplexMatrix<4> u;
        for (std::size_t col = 0; col < 4; ++col)
            for (std::size_t row = 0; row < 4; ++row) u(row, col) = states[col].v[row];
        return u;
    }
};

inline EigenBasis eigenbasis(const ModelParams& p) {
    validate_params(p);
    const double om = std::hypot(p.omega, p.delta);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const StateVector phi2 = StateVector::normalized({0.0, inv_sqrt2, inv_sqrt2, 0.0});
    const StateVector phi3 = StateVector::normalized({0.0, -inv_sqrt2, inv_sqrt2, 0.0});

    if (p.delta == 0.0) {
        // |ee> and |gg> are exact eigenstates; keep the +Omega slot on the
        // higher-energy one.
        const StateVector ee = StateVector({1.0, 0.0, 0.0, 0.0});
        const StateVector gg = StateVector({0.0, 0.0, 0.0, 1.0});
        if (p.omega >= 0.0)
            return EigenBasis{{ee, phi2, phi3, gg}, {om, p.j, -p.j, -om}, true};
        return EigenBasis{{gg, phi2, phi3, ee}, {om, p.j, -p.j, -om}, true};
    }

    // Stable forms of the normalization factors: with s = sqrt(2 Omega (Omega
    // + omega)), the +Omega state is (|gg> + (Omega+omega)/delta |ee>)
    // normalized and the -Omega state its orthogonal complement. Avoids the
    // cancellation in Omega - omega for small delta.
    const double s = std::sqrt(2.0 * om * (om + p.omega));
    const double sign_delta = p.delta > 0.0 ? 1.0 : -1.0;
    const StateVector phi1 = StateVector::normalized(
        {sign_delta * (om + p.omega) / s, 0.0, 0.0, std::abs(p.delta) / s});
    const StateVector phi4 =
        StateVector::normalized({-p.delta / s, 0.0, 0.0, (om + p.omega) / s});
    return EigenBasis{{phi1, phi2, phi3, phi4}, {om, p.j, -p.j, -om}, false};
}

// A b A^dagger - (A^dagger A b + b A^dagger A)/2; traceless for any b.
inline ComplexMatrix<4> dissipator_apply(const ComplexMatrix<4>& a, const ComplexMatrix<4>& b) {
    const ComplexMatrix<4> ad = adjoint(a);
    const ComplexMatrix<4> ada = ad * a;
    return a * b * ad - cdouble(0.5) * (ada * b + b * ada);
}

inline ComplexMatrix<4> dissipator_apply(const ComplexMatrix<4>& a, const DensityMatrix& rho) {
    return dissipator_apply(a, rho.matrix());
}

// Master-equation generator with the operator products cached, for repeated
// application along a trajectory:
//   drho/dt = -i [H, rho] + gamma (nbar+1) (D[S1-] + D[S2-]) rho
//                         + gamma  nbar    (D[S1+] + D[S2+]) rho
class MasterOperator {
  public:
    explicit MasterOperator(const ModelParams& p)
        : h_(build_hamiltonian(p)),
          rate_down_(p.gamma * (p.nbar + 1.0)),
          rate_up_(p.gamma * p.nbar) {
        const std::array<ComplexMatrix<4>, 4> ops = {
            spin_operator(1, SpinKind::minus), spin_operator(2, SpinKind::minus),
            spin_operator(1, SpinKind::plus), spin_operator(2, SpinKind::plus)};
        for (std::size_t k = 0; k < 4; ++k) {
            jump_[k] = ops[k];
            jump_dag_[k] = adjoint(ops[k]);
            jump_sq_[k] = jump_dag_[k] * jump_[k];
        }
    }

    ComplexMatrix<4> apply(const ComplexMatrix<4>& rho) const {
        const cdouble minus_i(0.0, -1.0);
        ComplexMatrix<4> out = minus_i * (h_ * rho - rho * h_);
        for (std::size_t k = 0; k < 4; ++k) {
            const double rate = k < 2 ? rate_down_ : rate_up_;
            if (rate == 0.0) continue;
            out += cdouble(rate) * (jump_[k] * rho * jump_dag_[k] -
                                    cdouble(0.5) * (jump_sq_[k] * rho + rho * jump_sq_[k]));
        }
        return out;
    }

    const ComplexMatrix<4>& hamiltonian() const { return h_; }

  private:
    ComplexMatrix<4> h_;
    double rate_down_;
    double rate_up_;
    std::array<ComplexMatrix<4>, 4> jump_;
    std::array<ComplexMatrix<4>, 4> jump_dag_;
    std::array<ComplexMatrix<4>, 4> jump_sq_;
};

inline ComplexMatrix<4> master_rhs(const ModelParams& p, const ComplexMatrix<4>& rho) {
    return MasterOperator(p).apply(rho);
}

inline ComplexMatrix<4> master_rhs(const ModelParams& p, const DensityMatrix& rho) {
    return master_rhs(p, rho.matrix());
}

// Column-stacking vectorization: entry (i, j) of a 4x4 matrix lands at
// position j*4 + i.
constexpr std::size_t vec_index(std::size_t i, std::size_t j) { return j * 4 + i; }

inline std::array<cdouble, 16> vec(const ComplexMatrix<4>& m) {
    std::array<cdouble, 16> out{};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) out[vec_index(i, j)] = m(i, j);
    return out;
}

inline ComplexMatrix<4> unvec(const std::array<cdouble, 16>& x) {
    ComplexMatrix<4> out;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) out(i, j) = x[vec_index(i, j)];
    return out;
}

// Matrix form of the master-equation generator on vectorized states:
// L vec(rho) = vec(drho/dt). With column stacking, vec(A X B) =
// (B^T kron A) vec(X).
inline ComplexMatrix<16> liouvillian_superoperator(const ModelParams& p) {
    validate_params(p);
    const ComplexMatrix<4> h = build_hamiltonian(p);
    const ComplexMatrix<4> id = ComplexMatrix<4>::identity();
    const cdouble minus_i(0.0, -1.0);
    ComplexMatrix<16> l = minus_i * (kron(id, h) - kron(transpose(h), id));
    const std::array<ComplexMatrix<4>, 4> ops = {
        spin_operator(1, SpinKind::minus), spin_operator(2, SpinKind::minus),
        spin_operator(1, SpinKind::plus), spin_operator(2, SpinKind::plus)};
    for (std::size_t k = 0; k < 4; ++k) {
        const double rate = k < 2 ? p.gamma * (p.nbar + 1.0) : p.gamma * p.nbar;
        if (rate == 0.0) continue;
        const ComplexMatrix<4> sq = adjoint(ops[k]) * ops[k];
        l += cdouble(rate) * (kron(entrywise_conj(ops[k]), ops[k]) -
                              cdouble(0.5) * (kron(id, sq) + kron(transpose(sq), id)));
    }
    return l;
}

// Single-decay-rate validity conditions: |j|/omega <= 0.1 and
// (Omega - omega)/omega <= 0.1.
struct RestrictionReport {
    double j_ratio = 0.0;
    double anisotropy_ratio = 0.0;
    bool passed = false;

    std::string describe() const {
        return "|j|/omega = " + detail::num_str(j_ratio) +
               " (limit 0.1), (Omega-omega)/omega = " + detail::num_str(anisotropy_ratio) +
               " (limit 0.1): " + (passed ? "within" : "outside") + " the validity region";
    }
};

inline RestrictionReport check_restrictions(const ModelParams& p) {
    validate_params(p);
    if (!(p.omega > 0.0))
        throw std::domain_error("restriction check requires omega > 0 (got " +
                                detail::num_str(p.omega) + ")");
    RestrictionReport r;
    r.j_ratio = std::abs(p.j) / p.omega;
    const double om = std::hypot(p.omega, p.delta);
    // Omega - omega rewritten to avoid cancellation for small delta.
    r.anisotropy_ratio = p.delta * p.delta / ((om + p.omega) * p.omega);
    r.passed = r.j_ratio <= 0.1 && r.anisotropy_ratio <= 0.1;
    return r;
}

inline constexpr std::array<std::string_view, 3> initial_state_names = {"gg", "bell_gg_ee",
                                                                        "mixed_fig1"};

// Reference initial states: the two-qubit ground state, the Bell state
// (|gg> - |ee>)/sqrt(2), and the equal mixture of |gg> with the symmetric
// Bell state (|eg> + |ge>)/sqrt(2).
inline DensityMatrix named_initial_state(std::string_view name) {
    if (name == "gg") {
        ComplexMatrix<4> m;
        m(3, 3) = 1.0;
        return DensityMatrix(m);
    }
    if (name == "bell_gg_ee") {
        const StateVector bell =
            StateVector::normalized({-1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)});
        return DensityMatrix(bell.projector());
    }
    if (name == "mixed_fig1") {
        ComplexMatrix<4> m;
        m(3, 3) = 0.5;
        m(1, 1) = m(2, 2) = 0.25;
        m(1, 2) = m(2, 1) = 0.25;
        return DensityMatrix(m);
    }
    throw std::invalid_argument("unknown initial state '" + std::string(name) +
                                "' (expected gg, bell_gg_ee or mixed_fig1, or a matrix file path)");
}

}  // namespace xyconc
