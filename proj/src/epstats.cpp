#include "qtherm/epstats.hpp"

#include <algorithm>
#include <cmath>

#include "qtherm/mat_fn.hpp"
#include "qtherm/tensor.hpp"

namespace qtherm {

namespace {

constexpr double kMergeTol = 1e-9;

ComplexMatrix state_log(const DensityMatrix& s)
{
    if (!s.is_faithful()) throw FaithfulnessError("state_log: state has a kernel");
    return mat_fn(s.mat(), [](double x) { return std::log(x); });
}

ComplexMatrix state_cpow(const DensityMatrix& s, cplx alpha)
{
    return mat_fn(s.mat(), [alpha](double x) { return std::exp(alpha * std::log(x)); });
}

// spectral blocks of ω: groups of (clipped) eigenvalues within 1e−10
std::vector<std::pair<double, ComplexMatrix>> state_blocks(const DensityMatrix& s)
{
    const std::size_t d = s.dim();
    const ComplexMatrix& v = s.eig().eigenvectors;
    std::vector<std::pair<double, ComplexMatrix>> blocks;
    std::size_t i = 0;
    while (i < d) {
        std::size_t j = i + 1;
        while (j < d && std::abs(s.probs()[j] - s.probs()[i]) <= 1e-10) ++j;
        ComplexMatrix p(d);
        for (std::size_t k = i; k < j; ++k)
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t c = 0; c < d; ++c)
                    p(r, c) += v(r, k) * std::conj(v(c, k));
        double lam = 0.0;
        for (std::size_t k = i; k < j; ++k) lam += s.probs()[k];
        lam /= static_cast<double>(j - i);
        blocks.emplace_back(lam, hermitize(p));
        i = j;
    }
    return blocks;
}

} // namespace

double OutcomeMeasure::mean() const
{
    double m = 0.0;
    for (const auto& a : atoms) m += a.s * a.p;
    return m;
}

cplx OutcomeMeasure::laplace(cplx alpha) const
{
    cplx f = 0.0;
    for (const auto& a : atoms) f += a.p * std::exp(-alpha * a.s);
    return f;
}

double OutcomeMeasure::weight_at(double s, double tol) const
{
    for (const auto& a : atoms)
        if (std::abs(a.s - s) <= tol) return a.p;
    return 0.0;
}

OutcomeMeasure make_outcome_measure(std::vector<Atom> atoms)
{
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.s < b.s; });
    OutcomeMeasure q;
    for (const auto& a : atoms) {
        double p = a.p;
        if (p < -1e-12) throw DomainError("make_outcome_measure: negative weight");
        if (p < 0.0) p = 0.0;
        if (!q.atoms.empty() && a.s - q.atoms.back().s <= kMergeTol) {
            // merge into the probability-weighted representative position
            Atom& last = q.atoms.back();
            const double tot = last.p + p;
            if (tot > 0.0) last.s = (last.s * last.p + a.s * p) / tot;
            last.p = tot;
        } else {
            q.atoms.push_back({a.s, p});
        }
    }
    double total = 0.0;
    for (const auto& a : q.atoms) total += a.p;
    if (std::abs(total - 1.0) > 1e-10)
        throw DomainError("make_outcome_measure: total weight not 1");
    // drop numerically null atoms (forbidden transitions) from the support
    std::erase_if(q.atoms, [](const Atom& a) { return a.p <= 1e-12; });
    return q;
}

OutcomeMeasure ttmep_law(const FiniteQDS& sys, double t)
{
    if (!sys.omega.is_faithful())
        throw FaithfulnessError("ttmep_law: omega has a kernel");
    const auto blocks = state_blocks(sys.omega);
    const ComplexMatrix u =
        mat_fn(sys.h_eig(), [t](double x) { return std::exp(cplx(0.0, -t * x)); });

    std::vector<Atom> atoms;
    for (const auto& [lam_a, p_a] : blocks) {
        // P_a ω P_a = λ_a P_a for a spectral projection of ω
        const ComplexMatrix evolved = u * p_a * u.adjoint();
        for (const auto& [lam_b, p_b] : blocks) {
            const double prob = lam_a * std::real((evolved * p_b).trace());
            // s = log λ_a − log λ_b makes Σ e^{−αs} p equal tr(ω_{−t}^α ω^{1−α})
            // and the mean equal −Ent(ω_t|ω) ≥ 0
            atoms.push_back({std::log(lam_a) - std::log(lam_b), prob});
        }
    }
    return make_outcome_measure(std::move(atoms));
}

cplx ttmep_charfn(const FiniteQDS& sys, double t, cplx alpha)
{
    if (!sys.omega.is_faithful())
        throw FaithfulnessError("ttmep_charfn: omega has a kernel");
    const DensityMatrix omega_mt(hermitize(evolve_state(sys, sys.omega.mat(), -t)));
    return (state_cpow(omega_mt, alpha) * state_cpow(sys.omega, 1.0 - alpha)).trace();
}

FluctuationReport fluctuation_relation_check(const FiniteQDS& sys,
                                             const TimeReversal& theta, double t)
{
    TriReport tri{};
    try {
        tri = is_tri(sys, theta);
    } catch (const IncompatibleTimeReversal&) {
        throw NotTRI("fluctuation_relation_check: dynamics not TRI");
    }
    if (!tri.ok) throw NotTRI("fluctuation_relation_check: state not TRI");

    const OutcomeMeasure q = ttmep_law(sys, t);
    FluctuationReport r{};
    for (const auto& a : q.atoms)
        r.max_defect_measure = std::max(
            r.max_defect_measure, std::abs(q.weight_at(-a.s) - std::exp(-a.s) * a.p));
    for (double alpha : {0.0, 0.2, 0.35, 0.5, 0.65, 0.8, 1.0})
        r.max_defect_charfn =
            std::max(r.max_defect_charfn, std::abs(ttmep_charfn(sys, t, alpha) -
                                                   ttmep_charfn(sys, t, 1.0 - alpha)));
    return r;
}

cplx bmv_charfn(const FiniteQDS& sys, double t, cplx alpha)
{
    const ComplexMatrix lw = state_log(sys.omega);
    const ComplexMatrix ct = lw - evolve_heisenberg(sys, lw, t);
    return expm(lw - alpha * ct).trace();
}

std::vector<BmvTtmepRow> bmv_vs_ttmep(const FiniteQDS& sys, double t,
                                      const std::vector<double>& alphas)
{
    std::vector<BmvTtmepRow> rows;
    for (double a : alphas)
        rows.push_back({a, ttmep_charfn(sys, t, a), bmv_charfn(sys, t, a)});
    return rows;
}

cplx ancilla_tomography(const FiniteQDS& sys, const DensityMatrix& rho_a, double t,
                        cplx alpha)
{
    if (std::abs(alpha.real()) > 1e-12)
        throw DomainError("ancilla_tomography: alpha must be purely imaginary");
    if (rho_a.dim() != 2)
        throw ShapeMismatch("ancilla_tomography: ancilla must be a qubit");
    const cplx coherence = rho_a.mat()(0, 1); // ⟨v₊, ρ_a v₋⟩ in the σ_z basis
    if (std::abs(coherence) <= 1e-12)
        throw ZeroCoherence("ancilla_tomography: vanishing ancilla coherence");

    const std::size_t d = sys.H.dim();
    const ComplexMatrix lw = state_log(sys.omega);
    const ComplexMatrix gen = kron(lw, pauli_z());
    // α imaginary ⇒ the dressing e^{(α/2) log ω ⊗ σ_z} is unitary
    const ComplexMatrix dress =
        mat_fn(gen, [alpha](double x) { return std::exp(0.5 * alpha * x); });
    const ComplexMatrix undress =
        mat_fn(gen, [alpha](double x) { return std::exp(-0.5 * alpha * x); });

    const ComplexMatrix u_free = kron(
        mat_fn(sys.h_eig(), [t](double x) { return std::exp(cplx(0.0, -t * x)); }),
        ComplexMatrix::identity(2));
    // e^{−itĤ_α} = dress e^{−it H⊗1} undress
    const ComplexMatrix u_def = dress * u_free * undress;

    ComplexMatrix n(2);
    n(1, 0) = 1.0; // N = |v₋⟩⟨v₊|
    const ComplexMatrix hat_omega = kron(sys.omega.mat(), rho_a.mat());
    const ComplexMatrix probe = kron(ComplexMatrix::identity(d), n);
    return (u_def * hat_omega * u_def.adjoint() * probe).trace() / coherence;
}

EPCocycle ep_cocycle(const FiniteQDS& sys, double t)
{
    const ComplexMatrix lw = state_log(sys.omega);
    const DensityMatrix omega_t(hermitize(evolve_state(sys, sys.omega.mat(), t)));
    EPCocycle r{ComplexMatrix(sys.H.dim()), ComplexMatrix(sys.H.dim()),
                ComplexMatrix(sys.H.dim())};
    r.ell_t = hermitize(state_log(omega_t) - lw);
    r.c_t = hermitize(lw - evolve_heisenberg(sys, lw, t));
    r.sigma = hermitize(cplx(0.0, 1.0) * commutator(lw, sys.H));
    return r;
}

} // namespace qtherm
