#include "qtherm/openqs.hpp"

#include <cmath>

#include "qtherm/mat_fn.hpp"
#include "qtherm/tensor.hpp"

namespace qtherm {

namespace {

bool is_tracial(const DensityMatrix& s)
{
    const std::size_t d = s.dim();
    return (s.mat() - (1.0 / static_cast<double>(d)) * ComplexMatrix::identity(d))
               .frob_norm() <= 1e-12;
}

} // namespace

OpenSystem build_open_system(const ComplexMatrix& h_sys,
                             const std::vector<ReservoirSpec>& reservoirs,
                             const std::vector<ComplexMatrix>& couplings,
                             const DensityMatrix* omega_sys)
{
    if (couplings.size() != reservoirs.size())
        throw ShapeMismatch("build_open_system: one coupling per reservoir required");

    OpenSystem sys;
    sys.h_sys_local = require_hermitian(h_sys, "build_open_system H_S");
    sys.reservoirs = reservoirs;
    sys.dims.push_back(h_sys.dim());
    for (const auto& r : reservoirs) sys.dims.push_back(r.h.dim());

    const std::size_t m = reservoirs.size();
    sys.h_free = embed(sys.h_sys_local, sys.dims, {0});
    for (std::size_t j = 0; j < m; ++j) {
        sys.h_res.push_back(
            embed(require_hermitian(reservoirs[j].h, "build_open_system H_j"), sys.dims,
                  {j + 1}));
        sys.h_free += sys.h_res.back();
    }

    const std::size_t d_total = sys.h_free.dim();
    sys.v_total = ComplexMatrix(d_total);
    double other = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
        const ComplexMatrix vj = require_hermitian(couplings[j], "build_open_system V_j");
        if (vj.dim() != sys.dims[0] * sys.dims[j + 1])
            throw ShapeMismatch("build_open_system: V_j must live on system x reservoir_j");
        sys.v.push_back(embed(vj, sys.dims, {0, j + 1}));
        sys.v_total += sys.v.back();

        // support check: the embedded coupling reduces back to its declared
        // factors
        other = 1.0;
        for (std::size_t k = 0; k < sys.dims.size(); ++k)
            if (k != 0 && k != j + 1) other *= static_cast<double>(sys.dims[k]);
        const ComplexMatrix red =
            (1.0 / other) * partial_trace(sys.v.back(), sys.dims, {0, j + 1});
        if ((embed(red, sys.dims, {0, j + 1}) - sys.v.back()).frob_norm() >
            1e-10 * (1.0 + vj.frob_norm()))
            throw ShapeMismatch("build_open_system: V_j support leaks outside its factors");
    }
    sys.h_total = sys.h_free + sys.v_total;

    sys.omega_sys = omega_sys
                        ? *omega_sys
                        : DensityMatrix((1.0 / static_cast<double>(sys.dims[0])) *
                                        ComplexMatrix::identity(sys.dims[0]));
    if (sys.omega_sys.dim() != sys.dims[0])
        throw ShapeMismatch("build_open_system: omega_sys dimension mismatch");
    if (!sys.omega_sys.is_faithful())
        throw FaithfulnessError("build_open_system: omega_sys has a kernel");

    ComplexMatrix prod = sys.omega_sys.mat();
    for (const auto& r : reservoirs) prod = kron(prod, gibbs(r.h, r.beta).mat());
    sys.omega = DensityMatrix(hermitize(prod));
    return sys;
}

FluxSet build_fluxes(const OpenSystem& sys)
{
    FluxSet f;
    const std::size_t d = sys.h_total.dim();
    f.sigma = ComplexMatrix(d);
    for (std::size_t j = 0; j < sys.v.size(); ++j) {
        f.fluxes.push_back(
            hermitize(cplx(0.0, 1.0) * commutator(sys.h_res[j], sys.v[j])));
        f.sigma -= sys.reservoirs[j].beta * f.fluxes.back();
    }
    if (!is_tracial(sys.omega_sys)) {
        // general σ = i[log ω, V]: the system factor contributes as well
        const ComplexMatrix log_s =
            embed(mat_fn(sys.omega_sys.mat(), [](double x) { return std::log(x); }),
                  sys.dims, {0});
        f.sigma += hermitize(cplx(0.0, 1.0) * commutator(log_s, sys.v_total));
    }
    f.sigma = hermitize(f.sigma);
    return f;
}

EntropyBalanceReport entropy_balance(const OpenSystem& sys, double t,
                                     const QuadratureSpec& quad)
{
    const FiniteQDS qds = sys.qds();
    const FluxSet f = build_fluxes(sys);

    EntropyBalanceReport r{};
    const DensityMatrix omega_t(hermitize(evolve_state(qds, sys.omega.mat(), t)));
    const ExtReal ent = relative_entropy(omega_t, sys.omega);
    r.ent = ent.value(); // ω faithful by construction, so finite

    r.integral = integrate_adaptive(
        [&](double s) {
            return std::real((evolve_state(qds, sys.omega.mat(), s) * f.sigma).trace());
        },
        0.0, t, quad);
    r.defect = std::abs(r.ent + r.integral);
    return r;
}

DensityMatrix ness_dephase(const FiniteQDS& sys)
{
    const std::size_t d = sys.H.dim();
    const ComplexMatrix& v = sys.h_eig().eigenvectors;
    const auto& lam = sys.h_eig().eigenvalues;
    const double tol = 1e-8 * (1.0 + sys.spread());

    ComplexMatrix wt = v.adjoint() * (sys.omega.mat() * v);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (std::abs(lam[i] - lam[j]) > tol) wt(i, j) = 0.0;
    return DensityMatrix(hermitize(v * wt * v.adjoint()));
}

DensityMatrix ness_dephase(const OpenSystem& sys) { return ness_dephase(sys.qds()); }

double ness_entropy_production(const OpenSystem& sys)
{
    const FluxSet f = build_fluxes(sys);
    return std::real((ness_dephase(sys).mat() * f.sigma).trace());
}

RuelleReport ruelle_decomposition(const OpenSystem& sys, double t)
{
    const FiniteQDS qds = sys.qds();
    const DensityMatrix omega_t(hermitize(evolve_state(qds, sys.omega.mat(), t)));

    ComplexMatrix dec = partial_trace(omega_t.mat(), sys.dims, {0});
    for (std::size_t a = 1; a < sys.dims.size(); ++a)
        dec = kron(dec, partial_trace(omega_t.mat(), sys.dims, {a}));
    const DensityMatrix omega_dec(hermitize(dec));

    RuelleReport r{};
    r.total = -relative_entropy(omega_t, sys.omega).value();
    r.delta_s = -relative_entropy(omega_t, omega_dec).value();
    r.delta_sigma = -relative_entropy(omega_dec, sys.omega).value();
    r.defect = std::abs(r.total - r.delta_s - r.delta_sigma);
    return r;
}

cplx duhamel_correlation(const FiniteQDS& sys, const ComplexMatrix& a,
                         const ComplexMatrix& b)
{
    if (!sys.omega.is_faithful())
        throw FaithfulnessError("duhamel_correlation: omega has a kernel");
    const std::size_t d = sys.H.dim();
    const ComplexMatrix& v = sys.omega.eig().eigenvectors;
    const auto& w = sys.omega.probs();
    const ComplexMatrix at = v.adjoint() * (a * v);
    const ComplexMatrix bt = v.adjoint() * (b * v);
    cplx s = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const double dl = std::log(w[i]) - std::log(w[j]);
            const double weight = std::abs(dl) < 1e-8 ? 0.5 * (w[i] + w[j])
                                                      : (w[i] - w[j]) / dl;
            s += at(i, j) * bt(j, i) * weight;
        }
    return s;
}

DensityMatrix linear_response_state(const OpenSystem& sys, double beta,
                                    const std::vector<double>& forces)
{
    if (forces.size() != sys.reservoirs.size())
        throw ShapeMismatch("linear_response_state: one force per reservoir required");
    // exp(−βH + Σ X_j H_j) = exp(−β(H − Σ (X_j/β) H_j))
    ComplexMatrix mod = sys.h_total;
    for (std::size_t j = 0; j < forces.size(); ++j)
        mod -= (forces[j] / beta) * sys.h_res[j];
    return gibbs(mod, beta);
}

GreenKuboReport green_kubo_check(const OpenSystem& sys, double beta, std::size_t j,
                                 const ComplexMatrix& a, double t, double h,
                                 const QuadratureSpec& quad)
{
    std::vector<double> zero(sys.reservoirs.size(), 0.0);
    const FiniteQDS qds(sys.h_total, linear_response_state(sys, beta, zero));
    const ComplexMatrix at = evolve_heisenberg(qds, a, t);

    auto value = [&](double x) {
        std::vector<double> forces = zero;
        forces[j] = x;
        return std::real((linear_response_state(sys, beta, forces).mat() * at).trace());
    };
    auto central = [&](double step) { return (value(step) - value(-step)) / (2.0 * step); };
    const double d1 = central(h), d2 = central(0.5 * h);

    GreenKuboReport r{};
    r.lhs_fd = (4.0 * d2 - d1) / 3.0;

    const FluxSet f = build_fluxes(sys);
    r.rhs_int = integrate_adaptive(
        [&](double s) {
            return std::real(
                duhamel_correlation(qds, evolve_heisenberg(qds, a, s), f.fluxes[j]));
        },
        0.0, t, quad);
    r.defect = std::abs(r.lhs_fd - r.rhs_int);
    return r;
}

OnsagerReport onsager_check(const OpenSystem& sys, double beta, double t_max,
                            const QuadratureSpec& quad)
{
    const std::vector<double> zero(sys.reservoirs.size(), 0.0);
    const FiniteQDS qds(sys.h_total, linear_response_state(sys, beta, zero));
    try {
        const TriReport tri = is_tri(qds, TimeReversal(ComplexMatrix::identity(sys.h_total.dim())));
        if (!tri.ok)
            throw NotTRI("onsager_check: equilibrium system not time-reversal invariant");
    } catch (const IncompatibleTimeReversal&) {
        throw NotTRI("onsager_check: dynamics not time-reversal invariant");
    }

    const FluxSet f = build_fluxes(sys);
    const std::size_t m = f.fluxes.size();
    OnsagerReport r{};
    r.L.assign(m, std::vector<double>(m, 0.0));
    r.asymmetry = 0.0;
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k)
            r.L[j][k] = integrate_adaptive(
                [&](double s) {
                    return std::real(duhamel_correlation(
                        qds, evolve_heisenberg(qds, f.fluxes[k], s), f.fluxes[j]));
                },
                0.0, t_max, quad);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k)
            r.asymmetry = std::max(r.asymmetry, std::abs(r.L[j][k] - r.L[k][j]));
    return r;
}

} // namespace qtherm
