#pragma once

#include <vector>

#include "qtherm/openqs.hpp"
#include "qtherm/qstate.hpp"
#include "qtherm/quadrature.hpp"

namespace qtherm {

// One interaction term: a Hermitian operator on the listed sites (strictly
// increasing, operator tensor-ordered accordingly).
struct InteractionTerm {
    std::vector<std::size_t> sites;
    ComplexMatrix op;
};

// Finite chunk of a spin lattice: sites {0, …, n_sites−1}, all with the same
// onsite dimension, and a sparse subset → operator map.
struct Interaction {
    std::size_t n_sites = 0;
    std::size_t site_dim = 2;
    std::vector<InteractionTerm> terms;
};

// Validates sites (in range, strictly increasing) and Hermiticity of each
// term; ShapeMismatch / NotHermitian on failure.
Interaction make_interaction(std::size_t n_sites, std::size_t site_dim,
                             std::vector<InteractionTerm> terms);

// H_Λ = Σ_{X⊆Λ} Φ(X) on the tensor factors of Λ (increasing site order);
// Λ = ∅ gives the 1×1 zero.  OverflowError past the tensor cap.
ComplexMatrix local_hamiltonian(const Interaction& phi,
                                const std::vector<std::size_t>& lambda);

// ‖Φ‖_λ = Σ_{n≥0} e^{λn} sup_x Σ_{X∋x, |X|=n+1} ‖Φ(X)‖.
double sr_norm(const Interaction& phi, double lambda);

// Hermitian operator norm (largest |eigenvalue|).
double op_norm_hermitian(const ComplexMatrix& a);

// δ_Φ(A) = i Σ_{X∩Λ≠∅} [Φ(X), A] for A supported on Λ; the result lives on
// the (sorted) union of Λ with the contributing subsets.
struct DerivationResult {
    ComplexMatrix op;
    std::vector<std::size_t> support;
};

DerivationResult derivation(const Interaction& phi, const ComplexMatrix& a,
                            const std::vector<std::size_t>& support);

struct DerivativeBound {
    double lhs;   // ‖δ_Φ^n(A)‖
    double bound; // (2^n n!/λ^n) e^{λ|Λ|} ‖Φ‖_λ^n ‖A‖
    bool ok;
};

DerivativeBound derivative_bound_check(const Interaction& phi, double lambda,
                                       const ComplexMatrix& a,
                                       const std::vector<std::size_t>& support, int n);

// (1/|Λ|) log tr e^{−βH_Λ}.
double finite_pressure(const Interaction& phi, const std::vector<std::size_t>& lambda,
                       double beta);

// Finite-volume open-lattice partition: the system block S plus disjoint
// reservoir blocks with inverse temperatures.  The blocks must cover all
// sites and no interaction term may couple two distinct reservoirs.
struct OpenLatticePartition {
    std::vector<std::size_t> s;
    std::vector<std::vector<std::size_t>> reservoirs;
    std::vector<double> betas;
};

struct OpenLatticeEp {
    ComplexMatrix sigma; // σ_Λ = i Σ_j β_j [H_Λ, H_{R_j}]
    DensityMatrix omega{ComplexMatrix::identity(1)}; // tracial on S ⊗ Gibbs blocks
    double balance_defect; // |Ent(ω_t|ω) + ∫_0^t ω_s(σ_Λ) ds|
};

OpenLatticeEp open_lattice_ep(const Interaction& phi, const OpenLatticePartition& part,
                              double t, const QuadratureSpec& quad = {});

} // namespace qtherm
