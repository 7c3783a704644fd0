#include "qtherm/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtherm/mat_fn.hpp"

namespace qtherm {

namespace {
constexpr double kClip = 1e-12;
} // namespace

DensityMatrix::DensityMatrix(const ComplexMatrix& m)
    : mat_(require_hermitian(m, "DensityMatrix"))
{
    eig_ = eig_hermitian(mat_);
    probs_ = eig_.eigenvalues;
    double sum = 0.0;
    for (auto& p : probs_) {
        if (p < -kClip)
            throw DomainError("DensityMatrix: eigenvalue " + std::to_string(p) +
                              " below -1e-12, not positive semidefinite");
        if (p < kClip) p = 0.0; // clipped: treated as exact kernel
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-10)
        throw DomainError("DensityMatrix: trace " + std::to_string(sum) +
                          " not 1 within tolerance");
    for (auto& p : probs_) p /= sum;
}

bool DensityMatrix::is_faithful(double tol) const
{
    return probs_.front() > tol; // ascending order
}

cplx DensityMatrix::expect(const ComplexMatrix& a) const
{
    if (a.dim() != dim()) throw ShapeMismatch("expect: dim mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t k = 0; k < dim(); ++k) s += mat_(i, k) * a(k, i);
    return s;
}

DensityMatrix gibbs(const ComplexMatrix& h, double beta)
{
    const HermitianEig eig = eig_hermitian(h);
    // Shift the exponent so its maximum is 0; underflow of far levels is
    // benign, overflow is impossible after the shift.
    double emax = -beta * eig.eigenvalues[0];
    for (double l : eig.eigenvalues) emax = std::max(emax, -beta * l);
    if (!std::isfinite(emax))
        throw OverflowError("gibbs: non-finite exponent");

    const std::size_t d = h.dim();
    std::vector<double> w(d);
    double z = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        w[i] = std::exp(-beta * eig.eigenvalues[i] - emax);
        z += w[i];
    }
    ComplexMatrix v = eig.eigenvectors;
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i) v(i, j) *= w[j] / z;
    return DensityMatrix(hermitize(v * eig.eigenvectors.adjoint()));
}

DensityMatrix gibbs(const GibbsSpec& spec) { return gibbs(spec.H, spec.beta); }

double von_neumann_entropy(const DensityMatrix& nu)
{
    double s = 0.0;
    for (double p : nu.probs())
        if (p > 0.0) s -= p * std::log(p);
    return s;
}

ExtReal relative_entropy(const DensityMatrix& nu, const DensityMatrix& rho)
{
    if (nu.dim() != rho.dim()) throw ShapeMismatch("relative_entropy: dim mismatch");
    const std::size_t d = nu.dim();

    // tr(ν log ν)
    double tr_nu_log_nu = 0.0;
    for (double p : nu.probs())
        if (p > 0.0) tr_nu_log_nu += p * std::log(p);

    // tr(ν log ρ) over supp ρ, plus the kernel weight tr(ν P_ker(ρ)).
    double tr_nu_log_rho = 0.0;
    double kernel_weight = 0.0;
    const auto& re = rho.eig();
    for (std::size_t j = 0; j < d; ++j) {
        // ⟨φ_j| ν |φ_j⟩
        cvector phi(d);
        for (std::size_t i = 0; i < d; ++i) phi[i] = re.eigenvectors(i, j);
        const double w = std::real(inner(phi, nu.mat() * phi));
        if (rho.probs()[j] > 0.0)
            tr_nu_log_rho += w * std::log(rho.probs()[j]);
        else
            kernel_weight += std::max(w, 0.0);
    }
    if (kernel_weight > 1e-10)
        return ExtReal::minus_inf(); // supp ν ⊄ supp ρ

    return ExtReal::finite(tr_nu_log_rho - tr_nu_log_nu);
}

double log_partition(const ComplexMatrix& h, double beta)
{
    const HermitianEig eig = eig_hermitian(h);
    double emax = -beta * eig.eigenvalues[0];
    for (double l : eig.eigenvalues) emax = std::max(emax, -beta * l);
    double z = 0.0;
    for (double l : eig.eigenvalues) z += std::exp(-beta * l - emax);
    return emax + std::log(z);
}

VariationalCheck gibbs_variational_check(const GibbsSpec& spec, const DensityMatrix& nu)
{
    VariationalCheck r{};
    const double s = von_neumann_entropy(nu);
    const double energy = std::real(nu.expect(spec.H));
    r.lhs = s - spec.beta * energy;
    r.pressure = log_partition(spec.H, spec.beta);
    r.gap = r.pressure - r.lhs;
    return r;
}

double trace_norm_hermitian(const ComplexMatrix& a)
{
    const HermitianEig eig = eig_hermitian(a);
    double s = 0.0;
    for (double l : eig.eigenvalues) s += std::abs(l);
    return s;
}

} // namespace qtherm
