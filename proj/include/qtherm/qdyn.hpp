#pragma once

#include <vector>

#include "qtherm/complex_matrix.hpp"
#include "qtherm/qstate.hpp"

namespace qtherm {

// Finite quantum dynamical system: the matrix algebra with Heisenberg
// dynamics τ^t(A) = e^{itH} A e^{−itH} and a reference state ω.
struct FiniteQDS {
    ComplexMatrix H;
    DensityMatrix omega;

    FiniteQDS(const ComplexMatrix& h, const DensityMatrix& om);

    const HermitianEig& h_eig() const { return h_eig_; }
    double spread() const; // λ_max − λ_min of H

private:
    HermitianEig h_eig_;
};

// Antilinear *-automorphism Θ(A) = U Ā U† (conjugation in the computational
// basis).  Involutivity requires U Ū = 1.
struct TimeReversal {
    ComplexMatrix theta_unitary;

    explicit TimeReversal(const ComplexMatrix& u);
    ComplexMatrix apply(const ComplexMatrix& a) const;
};

// τ^t(A) = e^{itH} A e^{−itH}.
ComplexMatrix evolve_heisenberg(const FiniteQDS& sys, const ComplexMatrix& a, double t);

// Schrödinger picture: ν_t = e^{−itH} ν e^{itH} (so that ν_t(A) = ν(A_t)).
ComplexMatrix evolve_state(const FiniteQDS& sys, const ComplexMatrix& nu, double t);

// F(z) = tr(ω A e^{izH} B e^{−izH}), entire in z at finite dimension.
// OverflowError if |Im z|·spread(H) > 700.
cplx correlation(const FiniteQDS& sys, const ComplexMatrix& a, const ComplexMatrix& b,
                 cplx z);

// max over t in t_grid of |F(t+iβ) − tr(ω τ^t(B) A)|; ≤ 1e−9 iff ω is the
// β-KMS (Gibbs) state of H.
double kms_check(const FiniteQDS& sys, double beta, const ComplexMatrix& a,
                 const ComplexMatrix& b, const std::vector<double>& t_grid);

struct TriReport {
    bool ok;
    double state_defect;    // max |ω(Θ(A)) − conj(ω(A†))| over a spanning set
    double dynamics_defect; // ‖Θ(H) − H‖_F
};

// Time-reversal invariance of (sys, Θ).  Throws IncompatibleTimeReversal if Θ
// fails to anticommute with the dynamics (Θ∘τ^t ≠ τ^{−t}∘Θ).
TriReport is_tri(const FiniteQDS& sys, const TimeReversal& theta);

} // namespace qtherm
