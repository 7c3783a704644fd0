#pragma once

#include "qtherm/complex_matrix.hpp"
#include "qtherm/qdyn.hpp"
#include "qtherm/qstate.hpp"

namespace qtherm {

// Standard representation of the d×d matrix algebra on the d²-dimensional
// Hilbert–Schmidt space, in the library-wide column-stacking convention
// (tensor.hpp).  The cyclic vector is Ω = vec(ω^{1/2}); the modular operator
// acts as Δ vec(X) = vec(ω X ω^{-1}) and J vec(X) = vec(X†).
struct StandardRep {
    DensityMatrix omega;
    cvector omega_vec; // vec(ω^{1/2})

    std::size_t sys_dim() const { return omega.dim(); }
    std::size_t gns_dim() const { return omega.dim() * omega.dim(); }

    // Left action π(A): X ↦ AX.
    ComplexMatrix pi(const ComplexMatrix& a) const;
    // Commutant action J π(A) J: X ↦ X A†.
    ComplexMatrix pi_commutant(const ComplexMatrix& a) const;
    // Modular conjugation on vectors.
    cvector apply_j(const cvector& v) const;

    ComplexMatrix delta() const;     // Δ
    ComplexMatrix log_delta() const; // log Δ (Hermitian)

    // Natural cone membership: v = vec(X) with X positive semidefinite
    // (up to tol in the smallest eigenvalue after hermitization).
    bool in_natural_cone(const cvector& v, double tol = 1e-10) const;
};

// FaithfulnessError if ω has a kernel (Δ needs ω^{-1}).
StandardRep build_standard_rep(const DensityMatrix& omega);

// Relative modular operator of the pair (ν,ρ): Δ_{ν|ρ} vec(X) = vec(ν X ρ^{-1}),
// with logarithms restricted to the supports (log ↦ 0 on kernels).
struct RelativeModular {
    ComplexMatrix log_delta; // Hermitian on the GNS space
};

RelativeModular relative_modular(const DensityMatrix& nu, const DensityMatrix& rho);

// ⟨Ω_ν, log Δ_{ρ|ν} Ω_ν⟩ with Ω_ν = vec(ν^{1/2}); equals the relative entropy
// of ν with respect to ρ when supp ν ⊆ supp ρ.
double araki_relative_entropy(const DensityMatrix& nu, const DensityMatrix& rho);

// Modular flow ς_ω^t(A) = ω^{it} A ω^{-it}; faithful ω required.
ComplexMatrix modular_flow(const DensityMatrix& omega, const ComplexMatrix& a, double t);

// Connes cocycle [Dν:Dρ]_t = ν^{it} ρ^{-it} as a system-space matrix;
// FaithfulnessError if either state has a kernel.
ComplexMatrix connes_cocycle(const DensityMatrix& nu, const DensityMatrix& rho, double t);

// Standard Liouvillean ℒ vec(X) = vec(HX − XH); Hermitian on the GNS space,
// generates the unitary implementation of the Heisenberg dynamics and
// preserves the natural cone.
ComplexMatrix standard_liouvillean(const FiniteQDS& sys);

// C-Liouvillean for the perturbed dynamics: sys.H = H_fr + v with the
// reference state invariant under the free part.  K = ℒ_fr + π(v) −
// J π(ω^{1/2} v ω^{-1/2}) J; non-Hermitian, annihilates Ω, and e^{itK}
// implements the full Heisenberg dynamics on π(ℳ).
// NotInvariant if [H_fr, ω] ≠ 0; FaithfulnessError if ω has a kernel.
ComplexMatrix c_liouvillean(const FiniteQDS& sys, const ComplexMatrix& v);

// Perturbed vector state: Ψ = e^{-β(ℒ+π(v))/2} Ω normalized, returned as the
// density matrix M M† with M = unvec(Ψ).  When sys.omega is the β-Gibbs state
// of sys.H this equals the β-Gibbs state of sys.H + v.
DensityMatrix araki_perturbation(const FiniteQDS& sys, const ComplexMatrix& v, double beta);

struct EntropyBalance {
    double lhs;    // Ent(ν∘τ_U | ω)
    double rhs;    // Ent(ν|ω) − i ν(U† δ_ω(U)),  δ_ω(U) = i[log ω, U]
    double defect; // |lhs − rhs|
};

// Entropy balance for the inner automorphism τ_U(A) = U† A U; ω faithful.
EntropyBalance entropy_balance_unitary(const DensityMatrix& nu, const DensityMatrix& omega,
                                       const ComplexMatrix& u);

} // namespace qtherm
