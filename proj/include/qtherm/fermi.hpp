#pragma once

#include <vector>

#include "qtherm/complex_matrix.hpp"
#include "qtherm/qstate.hpp"

namespace qtherm {

// CAR algebra on n modes realized on the 2ⁿ-dimensional Fock space through
// the Jordan–Wigner construction a_k = σ_z^{⊗(k−1)} ⊗ σ⁻ ⊗ 1.  The occupied
// single-site state is e₀ (so a₁ = [[0,0],[1,0]] on one mode) and the vacuum
// is the last computational basis vector.
struct FermionAlgebra {
    std::size_t n_modes = 0;
    std::vector<ComplexMatrix> a; // annihilators a_k

    std::size_t fock_dim() const { return std::size_t(1) << n_modes; }
    cvector vacuum() const;

    // a(f) = Σ_k conj(f_k) a_k (antilinear), a*(f) = Σ_k f_k a_k† (linear),
    // so that {a(f), a*(g)} = (f|g) 1 and ‖a(f)‖ = ‖f‖.
    ComplexMatrix annihilator(const cvector& f) const;
    ComplexMatrix creator(const cvector& f) const;

    // Second quantization dΓ(h) = Σ_{jk} h_{jk} a_j† a_k.
    ComplexMatrix d_gamma(const ComplexMatrix& h) const;
    // Multiplicative lift Γ(u) = e^{i dΓ(−i log u)} for unitary u;
    // LogBranchError if u has an eigenvalue on the negative real axis.
    ComplexMatrix gamma(const ComplexMatrix& u) const;
};

// OverflowError for n > 12 (Fock dimension past the exact-diagonalization cap).
FermionAlgebra jordan_wigner(std::size_t n);

// Gauge-invariant quasi-free state with mode-space symbol T (0 ≤ T ≤ 1):
// ω_T(a*(f) a(g)) = (g|Tf).  The density matrix is the product of occupation
// factors n_k N_k + (1−n_k)(1−N_k) over the eigenmodes of T, which covers the
// pure cases T ∈ {0, 1} without the singular log(T(1−T)⁻¹) detour.
struct QuasiFreeState {
    ComplexMatrix symbol;
    DensityMatrix rho{ComplexMatrix::identity(1)};
};

// SymbolRangeError unless the spectrum of T lies in [0,1] (within 1e−12).
QuasiFreeState quasi_free_state(const FermionAlgebra& alg, const ComplexMatrix& t_symbol);

// E(u) = det(1 + (u−1)T): the characteristic function of ω_T evaluated on a
// mode-space unitary, and its independent Fock-space pipeline tr(ρ Γ(u)).
cplx characteristic_fn(const QuasiFreeState& state, const ComplexMatrix& u);
cplx characteristic_fn_trace(const FermionAlgebra& alg, const QuasiFreeState& state,
                             const ComplexMatrix& u);

// Bogoliubov covariance defect: max over a spanning family of f of
// ‖e^{it dΓ(h)} a*(f) e^{−it dΓ(h)} − a*(e^{ith} f)‖_F.
double quasi_free_dynamics_check(const FermionAlgebra& alg, const ComplexMatrix& h,
                                 double t);

// Araki–Wyss doubled representation of the CAR algebra over ℂⁿ for a faithful
// symbol 0 < T < 1, built on 2n Jordan–Wigner modes with cyclic vector the
// doubled vacuum: π(a(f)) = a(√(1−T)f ⊕ 0) + a*(0 ⊕ conj(√T f)).
struct ArakiWyssRep {
    FermionAlgebra doubled; // 2n modes
    ComplexMatrix symbol;   // T
    ComplexMatrix sqrt_t;
    ComplexMatrix sqrt_1mt;
    cvector omega_vec; // Ω

    ComplexMatrix pi_annihilator(const cvector& f) const;
    ComplexMatrix pi_creator(const cvector& f) const;

    // Modular operator Δ = Γ(e^s ⊕ e^{−s̄}) with s = log(T(1−T)⁻¹), and its
    // Hermitian generator dΓ(s ⊕ −s̄).
    ComplexMatrix log_delta() const;
    ComplexMatrix delta() const;
};

// SymbolRangeError unless 0 < T < 1 strictly (within 1e−10 margins).
ArakiWyssRep araki_wyss_rep(const ComplexMatrix& t_symbol);

} // namespace qtherm
