#pragma once

#include <functional>
#include <vector>

#include "qtherm/complex_matrix.hpp"
#include "qtherm/qstate.hpp"

namespace qtherm {

// GKLS generator data: M(A) = i[Υ,A] − ½{ΣW_i†W_i, A} + ΣW_i†AW_i in the
// Heisenberg picture (unital), with the Schrödinger dual acting on states.
struct LindbladGen {
    ComplexMatrix upsilon;
    std::vector<ComplexMatrix> jump_ops;
};

enum class Picture { heisenberg, schroedinger };

// d²×d² matrix of a linear map on d×d matrices in the column-stacking
// convention of tensor.hpp.
struct Superoperator {
    std::size_t dim = 0;
    ComplexMatrix mat;
    Picture picture = Picture::heisenberg;

    ComplexMatrix apply(const ComplexMatrix& x) const;
};

Superoperator lindblad_to_super(const LindbladGen& gen, Picture picture);

struct CpReport {
    double choi_min_eig;  // smallest eigenvalue of C = Σ E_ij ⊗ Λ(E_ij)
    double unital_defect; // ‖Λ(1) − 1‖_F
    double trace_defect;  // max_ij |tr Λ(E_ij) − δ_ij|
};

CpReport cp_check(const Superoperator& lam);

struct DetailedBalanceReport {
    double invariance_defect; // ‖M_#(ρ)‖₁
    double dbc_defect;        // asymmetry of M₀ in (A|B)_ρ = tr(ρ^{1/2}A†ρ^{1/2}B)
    double dbc1_defect;       // asymmetry of M₀ in (A|B) = tr(ρA†B)
};

// M₀ = M − i[Υ,·]; defects are maxima over matrix-unit pairs.  ρ faithful.
DetailedBalanceReport detailed_balance_check(const LindbladGen& gen,
                                             const DensityMatrix& rho);

// Fermi-golden-rule level shift ∫ |v(ξ)|² (e + i0 − ξ)⁻¹ dξ over the range of
// omega_grid, where e is the k-th eigenvalue of the Hermitian matrix k_op.
// Returns the principal value minus iπ|v(e)|².  GridError if e lies within
// one grid cell of the boundary (the i0 prescription needs interior room).
cplx fgr_level_shift(const ComplexMatrix& k_op, std::size_t k_index,
                     const std::function<cplx(double)>& v,
                     const std::vector<double>& omega_grid);

// Density matrix in the kernel of a Schrödinger-picture generator, found via
// the smallest singular pair and a PSD projection; a finite-dimensional
// semigroup always has one.
DensityMatrix invariant_state(const Superoperator& m_sch);

// Weak-coupling extraction against an exact fermionic reservoir.
// H_λ = K⊗1 + 1⊗dΓ(h_modes) + λ Q⊗φ(f), reservoir in the β-Gibbs state of
// dΓ(h_modes); for each λ the reduced interaction-picture propagator at the
// van Hove time t/λ² is computed exactly and its matrix logarithm divided by
// t gives an effective Schrödinger generator.
struct WeakCouplingModel {
    ComplexMatrix k_sys;
    ComplexMatrix h_modes;
    ComplexMatrix q_sys;
    cvector f;
    double beta = 1.0;
};

struct WeakCouplingRow {
    double lambda;
    Superoperator generator;  // Schrödinger picture
    double cauchy_diff;       // Frobenius distance to the previous row (0 for first)
    double dbc_defect;        // GKNS symmetry of the dissipative part vs gibbs(K,β)
    double commutant_defect;  // ‖[generator, free evolution generator]‖_F
};

// LogBranchError if a reduced propagator has spectrum on the closed negative
// real axis (surfaced, not rotated away).  lambdas must be decreasing.
std::vector<WeakCouplingRow> weak_coupling_extract(const WeakCouplingModel& model,
                                                   const std::vector<double>& lambdas,
                                                   double t);

} // namespace qtherm
