#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qtherm/qdyn.hpp"
#include "qtherm/qstate.hpp"
#include "qtherm/quadrature.hpp"

namespace qtherm {

struct ReservoirSpec {
    std::string label;
    ComplexMatrix h;    // local reservoir Hamiltonian
    double beta = 1.0;  // inverse temperature of the reservoir's Gibbs factor
};

// Small system coupled to M finite reservoir blocks.  Factor 0 is the system,
// factor j+1 is reservoir j; coupling j lives on system ⊗ reservoir_j.  The
// reference state is ω = ω_S ⊗ ⊗_j ω_{β_j} with ω_S the normalized trace by
// default (any faithful system state may be supplied instead).
struct OpenSystem {
    std::vector<std::size_t> dims; // factor dimensions, system first
    ComplexMatrix h_sys_local;
    std::vector<ReservoirSpec> reservoirs;

    ComplexMatrix h_free;              // embedded H_S + Σ_j H_j
    std::vector<ComplexMatrix> h_res;  // embedded reservoir Hamiltonians
    std::vector<ComplexMatrix> v;      // embedded couplings
    ComplexMatrix v_total;             // Σ_j V_j
    ComplexMatrix h_total;             // h_free + v_total
    // product reference state and its system factor (placeholders until built)
    DensityMatrix omega{ComplexMatrix::identity(1)};
    DensityMatrix omega_sys{ComplexMatrix::identity(1)};

    FiniteQDS qds() const { return FiniteQDS(h_total, omega); }
};

// couplings[j] is a Hermitian operator on system ⊗ reservoir_j (local dims).
// ShapeMismatch on inconsistent dimensions; NotHermitian via the usual checks.
OpenSystem build_open_system(const ComplexMatrix& h_sys,
                             const std::vector<ReservoirSpec>& reservoirs,
                             const std::vector<ComplexMatrix>& couplings,
                             const DensityMatrix* omega_sys = nullptr);

struct FluxSet {
    ComplexMatrix sigma;               // entropy production observable
    std::vector<ComplexMatrix> fluxes; // J_j = i[H_j, V_j]
};

// J_j = i[H_j, V_j]; σ = −Σ_j β_j J_j (+ the i[log ω_S, V] term when the
// system reference state is not tracial), which equals i[log ω, V].
FluxSet build_fluxes(const OpenSystem& sys);

struct EntropyBalanceReport {
    double ent;      // Ent(ω_t | ω) ≤ 0
    double integral; // ∫_0^t ω_s(σ) ds
    double defect;   // |ent + integral|
};

EntropyBalanceReport entropy_balance(const OpenSystem& sys, double t,
                                     const QuadratureSpec& quad = {});

// Exact Cesàro limit of (1/T)∫_0^T ω∘τ^{-t} dt: pinching of ω over the
// spectral blocks of H (degenerate eigenvalues grouped, gauge invariant).
DensityMatrix ness_dephase(const FiniteQDS& sys);
DensityMatrix ness_dephase(const OpenSystem& sys);

// ω₊(σ) with ω₊ the dephased state; ≥ 0 up to round-off.
double ness_entropy_production(const OpenSystem& sys);

struct RuelleReport {
    double total;       // −Ent(ω_t | ω)
    double delta_s;     // −Ent(ω_t | ω_t^dec) ≥ 0
    double delta_sigma; // −Ent(ω_t^dec | ω) ≥ 0
    double defect;      // |total − delta_s − delta_sigma|
};

// ω_t^dec = product of the factor marginals of ω_t; the decomposition is an
// identity because ω itself is a product over the factors.
RuelleReport ruelle_decomposition(const OpenSystem& sys, double t);

// Duhamel (canonical) correlation ⟨A|B⟩_ω = ∫_0^1 ω(A ω^θ B ω^{-θ}) dθ,
// evaluated in closed form in the ω-eigenbasis:
// Σ_ij Ã_ij B̃_ji (w_i − w_j)/(log w_i − log w_j)  (diagonal limit w_i).
// FaithfulnessError if ω has a kernel.
cplx duhamel_correlation(const FiniteQDS& sys, const ComplexMatrix& a,
                         const ComplexMatrix& b);

// Reference family for linear response: ω_X ∝ exp(−βH + Σ_j X_j H_j), the
// equilibrium Gibbs state of the coupled Hamiltonian at X = 0.  The X = 0
// state must be invariant under the full dynamics for the finite-time
// Green–Kubo identity to hold, which rules out the product reference state.
DensityMatrix linear_response_state(const OpenSystem& sys, double beta,
                                    const std::vector<double>& forces);

struct GreenKuboReport {
    double lhs_fd;  // ∂_{X_j} ω_X(τ^t(A))|_{X=0}, central differences
    double rhs_int; // ∫_0^t ⟨τ^s(A)|Φ_j⟩_ω ds
    double defect;
};

// Finite-time Green–Kubo check for force component j (0-based), step h with
// one Richardson level; the Duhamel correlation is taken in the equilibrium
// state linear_response_state(sys, beta, 0).
GreenKuboReport green_kubo_check(const OpenSystem& sys, double beta, std::size_t j,
                                 const ComplexMatrix& a, double t, double h = 1e-3,
                                 const QuadratureSpec& quad = {});

struct OnsagerReport {
    std::vector<std::vector<double>> L; // L_jk(t) = ∫_0^t ⟨τ^s(Φ_k)|Φ_j⟩ ds
    double asymmetry;                   // max_jk |L_jk − L_kj| (diagnostic)
};

// Finite-time kinetic coefficients in the equilibrium state at X = 0.
// NotTRI unless the system is time-reversal invariant under plain
// conjugation.
OnsagerReport onsager_check(const OpenSystem& sys, double beta, double t_max,
                            const QuadratureSpec& quad = {});

} // namespace qtherm
