#pragma once

#include "qtherm/complex_matrix.hpp"
#include "qtherm/eig.hpp"
#include "qtherm/extreal.hpp"

namespace qtherm {

// Positive semidefinite, unit-trace matrix with cached eigendecomposition.
// Eigenvalues below the 1e−12 clipping threshold are treated as exact zeros
// (support-kernel logic); slightly negative eigenvalues down to −1e−12 are
// clipped to zero; anything below that is rejected.
class DensityMatrix {
public:
    explicit DensityMatrix(const ComplexMatrix& m);

    const ComplexMatrix& mat() const { return mat_; }
    const HermitianEig& eig() const { return eig_; }
    std::size_t dim() const { return mat_.dim(); }

    // Clipped eigenvalues (ascending, sum exactly renormalized to 1).
    const std::vector<double>& probs() const { return probs_; }

    bool is_faithful(double tol = 1e-12) const;

    // Expectation tr(ρ A).
    cplx expect(const ComplexMatrix& a) const;

private:
    ComplexMatrix mat_;
    HermitianEig eig_;
    std::vector<double> probs_;
};

struct GibbsSpec {
    ComplexMatrix H;  // Hermitian
    double beta = 1.0;
};

// ω_β = e^{−βH}/tr e^{−βH}, computed with a shifted exponent for stability.
DensityMatrix gibbs(const GibbsSpec& spec);
DensityMatrix gibbs(const ComplexMatrix& h, double beta);

// S(ν) = −tr(ν log ν), with 0·log 0 := 0.
double von_neumann_entropy(const DensityMatrix& nu);

// Ent(ν|ρ) = tr(ν(log ρ − log ν)) ≤ 0; −∞ (tagged) iff supp ν ⊄ supp ρ.
ExtReal relative_entropy(const DensityMatrix& nu, const DensityMatrix& rho);

struct VariationalCheck {
    double lhs;       // S(ν) − β ν(H)
    double pressure;  // P(β) = log tr e^{−βH}
    double gap;       // pressure − lhs ≥ 0
};

// Finite Gibbs variational principle: S(ν) − βν(H) ≤ P(β), equality iff ν=ω_β.
VariationalCheck gibbs_variational_check(const GibbsSpec& spec, const DensityMatrix& nu);

// log tr e^{−βH}, stably shifted.
double log_partition(const ComplexMatrix& h, double beta);

// Trace norm of a Hermitian matrix (sum of |eigenvalues|).
double trace_norm_hermitian(const ComplexMatrix& a);

} // namespace qtherm
