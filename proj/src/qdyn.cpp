#include "qtherm/qdyn.hpp"

#include <cmath>

#include "qtherm/mat_fn.hpp"

namespace qtherm {

FiniteQDS::FiniteQDS(const ComplexMatrix& h, const DensityMatrix& om)
    : H(require_hermitian(h, "FiniteQDS")), omega(om)
{
    if (H.dim() != omega.dim()) throw ShapeMismatch("FiniteQDS: H and omega dims differ");
    h_eig_ = eig_hermitian(H);
}

double FiniteQDS::spread() const
{
    return h_eig_.eigenvalues.back() - h_eig_.eigenvalues.front();
}

TimeReversal::TimeReversal(const ComplexMatrix& u) : theta_unitary(u)
{
    const std::size_t d = u.dim();
    if ((u * u.adjoint() - ComplexMatrix::identity(d)).frob_norm() > 1e-10 * d)
        throw DomainError("TimeReversal: U not unitary");
    // Involutivity on operators: Θ² = Id needs U Ū = 1.
    if ((u * u.conj() - ComplexMatrix::identity(d)).frob_norm() > 1e-10 * d)
        throw DomainError("TimeReversal: U conj(U) != 1, theta not involutive");
}

ComplexMatrix TimeReversal::apply(const ComplexMatrix& a) const
{
    return theta_unitary * a.conj() * theta_unitary.adjoint();
}

ComplexMatrix evolve_heisenberg(const FiniteQDS& sys, const ComplexMatrix& a, double t)
{
    const ComplexMatrix u =
        mat_fn(sys.h_eig(), [t](double x) { return std::exp(cplx(0.0, t * x)); });
    return u * a * u.adjoint();
}

ComplexMatrix evolve_state(const FiniteQDS& sys, const ComplexMatrix& nu, double t)
{
    const ComplexMatrix u =
        mat_fn(sys.h_eig(), [t](double x) { return std::exp(cplx(0.0, -t * x)); });
    return u * nu * u.adjoint();
}

cplx correlation(const FiniteQDS& sys, const ComplexMatrix& a, const ComplexMatrix& b,
                 cplx z)
{
    if (std::abs(z.imag()) * sys.spread() > 700.0)
        throw OverflowError("correlation: |Im z|*spread(H) > 700");
    // Evaluate in the H-eigenbasis with one fused exponential per matrix
    // element: tr(ω A e^{izH} B e^{−izH}) = Σ_pq (ω̃Ã)_pq B̃_qp e^{iz(λ_q−λ_p)}.
    // Forming e^{izH} as a matrix first would expose the huge intermediate
    // entries e^{|Im z|·λ} to round-off that no longer cancels.
    const ComplexMatrix& v = sys.h_eig().eigenvectors;
    const auto& lam = sys.h_eig().eigenvalues;
    const ComplexMatrix wa = v.adjoint() * (sys.omega.mat() * a) * v;
    const ComplexMatrix bt = v.adjoint() * b * v;
    cplx f = 0.0;
    const std::size_t d = a.dim();
    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q)
            f += wa(p, q) * bt(q, p) * std::exp(cplx(0.0, 1.0) * z * (lam[q] - lam[p]));
    return f;
}

double kms_check(const FiniteQDS& sys, double beta, const ComplexMatrix& a,
                 const ComplexMatrix& b, const std::vector<double>& t_grid)
{
    double defect = 0.0;
    for (double t : t_grid) {
        const cplx lhs = correlation(sys, a, b, cplx(t, beta));
        const cplx rhs = (sys.omega.mat() * evolve_heisenberg(sys, b, t) * a).trace();
        defect = std::max(defect, std::abs(lhs - rhs));
    }
    return defect;
}

TriReport is_tri(const FiniteQDS& sys, const TimeReversal& theta)
{
    const std::size_t d = sys.H.dim();
    if (theta.theta_unitary.dim() != d)
        throw ShapeMismatch("is_tri: theta dim mismatch");

    // Θ∘τ^t = τ^{−t}∘Θ for all t iff Θ(H) = H (the antilinearity flips the
    // sign of it in the exponent).
    const ComplexMatrix th = theta.apply(sys.H);
    const double dyn_defect = (th - sys.H).frob_norm();
    if (dyn_defect > 1e-8 * (1.0 + sys.H.frob_norm()))
        throw IncompatibleTimeReversal("is_tri: theta does not reverse the dynamics, "
                                       "‖Θ(H)−H‖ too large");

    // ω(Θ(A)) = conj(ω(A†)) on a spanning set: Hermitian matrix units.
    double state_defect = 0.0;
    auto probe = [&](const ComplexMatrix& a) {
        const cplx lhs = sys.omega.expect(theta.apply(a));
        const cplx rhs = std::conj(sys.omega.expect(a.adjoint()));
        state_defect = std::max(state_defect, std::abs(lhs - rhs));
    };
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            ComplexMatrix s(d);
            s(i, j) += 1.0;
            s(j, i) += 1.0;
            probe(s);
            if (i != j) {
                ComplexMatrix aij(d);
                aij(i, j) = cplx(0.0, 1.0);
                aij(j, i) = cplx(0.0, -1.0);
                probe(aij);
            }
        }

    TriReport r{};
    r.state_defect = state_defect;
    r.dynamics_defect = dyn_defect;
    r.ok = state_defect <= 1e-10 && dyn_defect <= 1e-10;
    return r;
}

} // namespace qtherm
