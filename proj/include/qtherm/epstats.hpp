#pragma once

#include <vector>

#include "qtherm/qdyn.hpp"
#include "qtherm/qstate.hpp"

namespace qtherm {

// Finite weighted atom list over ℝ (entropy-exchange laws and similar
// statistics).  Atoms are kept sorted and merged at |s−s'| ≤ 1e−9.
struct Atom {
    double s;
    double p;
};

struct OutcomeMeasure {
    std::vector<Atom> atoms;

    double mean() const;
    // Σ_s e^{−αs} Q(s)
    cplx laplace(cplx alpha) const;
    // weight of the atom at s (0 when none within tol)
    double weight_at(double s, double tol = 1e-9) const;
};

// Sorts, merges (1e−9), clips tiny negative weights and checks normalization.
OutcomeMeasure make_outcome_measure(std::vector<Atom> atoms);

// Two-time measurement law: measure ω twice around the evolution,
// p_t(a,a') = tr(e^{−itH} P_a ω P_a e^{itH} P_{a'}), s = log λ_a − log λ_{a'}
// (initial minus final, so that the Laplace transform is tr(ω_{−t}^α ω^{1−α})
// and the mean is −Ent(ω_t|ω) ≥ 0).
// Degenerate ω eigenvalues are grouped into spectral blocks, which reduces to
// the textbook protocol for simple spectra.  FaithfulnessError on kernels.
OutcomeMeasure ttmep_law(const FiniteQDS& sys, double t);

// 𝔉_t(α) = tr(ω_{−t}^α ω^{1−α}) with ω_{−t} = e^{itH} ω e^{−itH}; equals the
// Laplace transform of ttmep_law.
cplx ttmep_charfn(const FiniteQDS& sys, double t, cplx alpha);

struct FluctuationReport {
    double max_defect_measure; // max_s |Q_t(−s) − e^{−s} Q_t(s)|
    double max_defect_charfn;  // max_α |𝔉(α) − 𝔉(1−α)| on a grid in [0,1]
};

// Evans–Searles-type symmetry under time reversal; NotTRI unless is_tri
// passes for (sys, theta).
FluctuationReport fluctuation_relation_check(const FiniteQDS& sys,
                                             const TimeReversal& theta, double t);

// 𝔉_t(α) = tr e^{log ω − α c^t} with c^t = log ω − τ^t(log ω).
cplx bmv_charfn(const FiniteQDS& sys, double t, cplx alpha);

struct BmvTtmepRow {
    double alpha;
    cplx f_ttm;
    cplx f_bmv;
};

std::vector<BmvTtmepRow> bmv_vs_ttmep(const FiniteQDS& sys, double t,
                                      const std::vector<double>& alphas);

// Ancilla interferometry: couple a probe qubit, deform the Hamiltonian by
// Ĥ_α = e^{(α/2) log ω ⊗ σ_z} (H⊗1) e^{−(α/2) log ω ⊗ σ_z} and read the
// probe coherence; returns the reconstructed characteristic function.
// Requires purely imaginary α; ZeroCoherence if ⟨v₊, ρ_a v₋⟩ = 0.
cplx ancilla_tomography(const FiniteQDS& sys, const DensityMatrix& rho_a, double t,
                        cplx alpha);

// Entropy-production cocycle objects: ℓ = log ω_t − log ω, c^t = τ^t(ℓ)
// (equivalently log ω − τ^t(log ω)), σ = i[log ω, H].
struct EPCocycle {
    ComplexMatrix ell_t;
    ComplexMatrix c_t;
    ComplexMatrix sigma;
};

EPCocycle ep_cocycle(const FiniteQDS& sys, double t);

} // namespace qtherm
