#include "qtherm/modular.hpp"

#include <cmath>
#include <functional>

#include "qtherm/mat_fn.hpp"
#include "qtherm/tensor.hpp"

namespace qtherm {

namespace {

// V f(p) V† with f applied to the clipped, normalized eigenvalues of a state
// (the cached HermitianEig carries the raw values, so go through probs()).
ComplexMatrix state_fn(const DensityMatrix& s, const std::function<cplx(double)>& f)
{
    const std::size_t d = s.dim();
    const ComplexMatrix& v = s.eig().eigenvectors;
    ComplexMatrix scaled = v;
    for (std::size_t j = 0; j < d; ++j) {
        const cplx fj = f(s.probs()[j]);
        for (std::size_t i = 0; i < d; ++i) scaled(i, j) *= fj;
    }
    return scaled * v.adjoint();
}

// log on the support, 0 on the kernel (probs are clipped exactly to 0).
ComplexMatrix support_log(const DensityMatrix& s)
{
    return hermitize(state_fn(s, [](double p) { return p > 0.0 ? std::log(p) : 0.0; }));
}

ComplexMatrix state_power_it(const DensityMatrix& s, double t)
{
    if (!s.is_faithful()) throw FaithfulnessError("state_power_it: state has a kernel");
    return state_fn(s, [t](double p) { return std::exp(cplx(0.0, t * std::log(p))); });
}

void require_faithful(const DensityMatrix& s, const char* what)
{
    if (!s.is_faithful()) throw FaithfulnessError(std::string(what) + ": state has a kernel");
}

} // namespace

ComplexMatrix StandardRep::pi(const ComplexMatrix& a) const { return left_mult(a); }

ComplexMatrix StandardRep::pi_commutant(const ComplexMatrix& a) const
{
    return right_mult(a.adjoint());
}

cvector StandardRep::apply_j(const cvector& v) const { return vec(unvec(v).adjoint()); }

ComplexMatrix StandardRep::delta() const
{
    const ComplexMatrix inv = state_fn(omega, [](double p) { return 1.0 / p; });
    return left_mult(omega.mat()) * right_mult(inv);
}

ComplexMatrix StandardRep::log_delta() const
{
    const ComplexMatrix lw = support_log(omega);
    return left_mult(lw) - right_mult(lw);
}

bool StandardRep::in_natural_cone(const cvector& v, double tol) const
{
    const ComplexMatrix x = unvec(v);
    const double scale = 1.0 + x.frob_norm();
    if (hermiticity_defect(x) > tol * scale) return false;
    const HermitianEig e = eig_hermitian(hermitize(x));
    return e.eigenvalues.front() >= -tol * scale;
}

StandardRep build_standard_rep(const DensityMatrix& omega)
{
    require_faithful(omega, "build_standard_rep");
    StandardRep rep{omega, vec(state_fn(omega, [](double p) { return std::sqrt(p); }))};
    return rep;
}

RelativeModular relative_modular(const DensityMatrix& nu, const DensityMatrix& rho)
{
    if (nu.dim() != rho.dim()) throw ShapeMismatch("relative_modular: dim mismatch");
    return RelativeModular{left_mult(support_log(nu)) - right_mult(support_log(rho))};
}

double araki_relative_entropy(const DensityMatrix& nu, const DensityMatrix& rho)
{
    const RelativeModular rm = relative_modular(rho, nu); // Δ_{ρ|ν}
    const cvector omega_nu = vec(state_fn(nu, [](double p) { return std::sqrt(p); }));
    return std::real(inner(omega_nu, rm.log_delta * omega_nu));
}

ComplexMatrix modular_flow(const DensityMatrix& omega, const ComplexMatrix& a, double t)
{
    const ComplexMatrix u = state_power_it(omega, t);
    return u * a * u.adjoint();
}

ComplexMatrix connes_cocycle(const DensityMatrix& nu, const DensityMatrix& rho, double t)
{
    if (nu.dim() != rho.dim()) throw ShapeMismatch("connes_cocycle: dim mismatch");
    return state_power_it(nu, t) * state_power_it(rho, -t);
}

ComplexMatrix standard_liouvillean(const FiniteQDS& sys)
{
    return left_mult(sys.H) - right_mult(sys.H);
}

ComplexMatrix c_liouvillean(const FiniteQDS& sys, const ComplexMatrix& v)
{
    const ComplexMatrix pert = require_hermitian(v, "c_liouvillean perturbation");
    const ComplexMatrix h_fr = sys.H - pert;
    require_faithful(sys.omega, "c_liouvillean");
    const ComplexMatrix comm = commutator(h_fr, sys.omega.mat());
    if (comm.frob_norm() > 1e-9 * (1.0 + h_fr.frob_norm()))
        throw NotInvariant("c_liouvillean: reference state not invariant under the "
                           "free dynamics");

    const ComplexMatrix shalf = state_fn(sys.omega, [](double p) { return std::sqrt(p); });
    const ComplexMatrix sinvhalf =
        state_fn(sys.omega, [](double p) { return 1.0 / std::sqrt(p); });
    // J π(ω^{1/2} v ω^{-1/2}) J = right_mult((ω^{1/2} v ω^{-1/2})†).
    const ComplexMatrix tail = (shalf * pert * sinvhalf).adjoint();
    return left_mult(h_fr) - right_mult(h_fr) + left_mult(pert) - right_mult(tail);
}

DensityMatrix araki_perturbation(const FiniteQDS& sys, const ComplexMatrix& v, double beta)
{
    const ComplexMatrix pert = require_hermitian(v, "araki_perturbation");
    const ComplexMatrix gen =
        (-0.5 * beta) * (standard_liouvillean(sys) + left_mult(pert));
    cvector psi = expm(gen) * vec(state_fn(sys.omega, [](double p) { return std::sqrt(p); }));
    const double n = vec_norm(psi);
    if (!(n > 0.0) || !std::isfinite(n))
        throw OverflowError("araki_perturbation: perturbed vector not normalizable");
    for (auto& c : psi) c /= n;
    const ComplexMatrix m = unvec(psi);
    return DensityMatrix(hermitize(m * m.adjoint()));
}

EntropyBalance entropy_balance_unitary(const DensityMatrix& nu, const DensityMatrix& omega,
                                       const ComplexMatrix& u)
{
    const std::size_t d = u.dim();
    if (nu.dim() != d || omega.dim() != d)
        throw ShapeMismatch("entropy_balance_unitary: dim mismatch");
    if ((u * u.adjoint() - ComplexMatrix::identity(d)).frob_norm() > 1e-10 * d)
        throw DomainError("entropy_balance_unitary: U not unitary");
    require_faithful(omega, "entropy_balance_unitary");

    // ν∘τ_U with τ_U(A) = U† A U has density matrix U ν U†.
    const DensityMatrix nut(hermitize(u * nu.mat() * u.adjoint()));
    const ExtReal lhs = relative_entropy(nut, omega);
    const ExtReal base = relative_entropy(nu, omega);

    // −i ν(U† δ_ω(U)) with δ_ω(U) = i[log ω, U].
    const ComplexMatrix lw = support_log(omega);
    const cplx corr = (nu.mat() * (u.adjoint() * commutator(lw, u))).trace();

    EntropyBalance r{};
    r.lhs = lhs.value();
    r.rhs = base.value() + std::real(corr);
    r.defect = std::abs(r.lhs - r.rhs);
    return r;
}

} // namespace qtherm
