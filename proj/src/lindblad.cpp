#include "qtherm/lindblad.hpp"

#include <cmath>

#include "qtherm/eig.hpp"
#include "qtherm/fermi.hpp"
#include "qtherm/mat_fn.hpp"
#include "qtherm/quadrature.hpp"
#include "qtherm/tensor.hpp"

namespace qtherm {

namespace {

ComplexMatrix commutator_super(const ComplexMatrix& h)
{
    return left_mult(h) - right_mult(h);
}

ComplexMatrix matrix_unit(std::size_t d, std::size_t i, std::size_t j)
{
    ComplexMatrix e(d);
    e(i, j) = 1.0;
    return e;
}

// canonical Hamiltonian part of a Schrödinger-picture generator: in the
// traceless-jump gauge the partial trace over the left Kronecker factor is
// B = −i d Υ − (d/2) ΣW†W + (scalar)·1, so Υ = (i/2d)(B − B†) up to trace
ComplexMatrix extract_upsilon(const Superoperator& gen)
{
    const std::size_t d = gen.dim;
    const std::vector<std::size_t> dims{d, d};
    const ComplexMatrix b = partial_trace(gen.mat, dims, {1});
    ComplexMatrix u = (cplx(0.0, 1.0) / (2.0 * static_cast<double>(d))) *
                      (b - b.adjoint());
    const cplx tr = u.trace() / static_cast<double>(d);
    for (std::size_t i = 0; i < d; ++i) u(i, i) -= tr;
    return hermitize(u);
}

double dbc_asymmetry(const Superoperator& m0_heis, const DensityMatrix& rho,
                     bool gns_weight)
{
    const std::size_t d = m0_heis.dim;
    const ComplexMatrix sqrt_rho =
        mat_fn(rho.mat(), [](double x) { return std::sqrt(x); });
    const auto pairing = [&](const ComplexMatrix& a, const ComplexMatrix& b) {
        if (gns_weight) return (sqrt_rho * a.adjoint() * sqrt_rho * b).trace();
        return (rho.mat() * a.adjoint() * b).trace();
    };
    std::vector<ComplexMatrix> units, images;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            units.push_back(matrix_unit(d, i, j));
            images.push_back(m0_heis.apply(units.back()));
        }
    double defect = 0.0;
    for (std::size_t p = 0; p < units.size(); ++p)
        for (std::size_t q = 0; q < units.size(); ++q)
            defect = std::max(defect, std::abs(pairing(units[p], images[q]) -
                                               pairing(images[p], units[q])));
    return defect;
}

} // namespace

ComplexMatrix Superoperator::apply(const ComplexMatrix& x) const
{
    if (x.dim() != dim) throw ShapeMismatch("Superoperator::apply: dimension mismatch");
    return unvec(mat * vec(x));
}

Superoperator lindblad_to_super(const LindbladGen& gen, Picture picture)
{
    const ComplexMatrix ups = require_hermitian(gen.upsilon, "LindbladGen upsilon");
    const std::size_t d = ups.dim();
    ComplexMatrix k(d);
    for (const auto& w : gen.jump_ops) {
        if (w.dim() != d) throw ShapeMismatch("LindbladGen: jump operator dimension");
        k += w.adjoint() * w;
    }

    Superoperator s;
    s.dim = d;
    s.picture = picture;
    s.mat = ComplexMatrix(d * d);
    s.mat -= 0.5 * (left_mult(k) + right_mult(k));
    if (picture == Picture::heisenberg) {
        s.mat += cplx(0.0, 1.0) * commutator_super(ups);
        for (const auto& w : gen.jump_ops)
            s.mat += left_mult(w.adjoint()) * right_mult(w);
    } else {
        s.mat -= cplx(0.0, 1.0) * commutator_super(ups);
        for (const auto& w : gen.jump_ops)
            s.mat += left_mult(w) * right_mult(w.adjoint());
    }
    return s;
}

CpReport cp_check(const Superoperator& lam)
{
    const std::size_t d = lam.dim;
    ComplexMatrix choi(d * d);
    CpReport r{};
    r.trace_defect = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const ComplexMatrix img = lam.apply(matrix_unit(d, i, j));
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b)
                    choi(i * d + a, j * d + b) = img(a, b);
            const double want = (i == j) ? 1.0 : 0.0;
            r.trace_defect = std::max(r.trace_defect, std::abs(img.trace() - want));
        }
    const HermitianEig e = eig_hermitian(hermitize(choi));
    r.choi_min_eig = e.eigenvalues.front();
    r.unital_defect =
        (lam.apply(ComplexMatrix::identity(d)) - ComplexMatrix::identity(d)).frob_norm();
    return r;
}

DetailedBalanceReport detailed_balance_check(const LindbladGen& gen,
                                             const DensityMatrix& rho)
{
    if (!rho.is_faithful())
        throw FaithfulnessError("detailed_balance_check: rho has a kernel");
    const Superoperator m_heis = lindblad_to_super(gen, Picture::heisenberg);
    const Superoperator m_sch = lindblad_to_super(gen, Picture::schroedinger);

    Superoperator m0 = m_heis;
    m0.mat -= cplx(0.0, 1.0) * commutator_super(gen.upsilon);

    DetailedBalanceReport r{};
    r.invariance_defect = trace_norm_hermitian(hermitize(m_sch.apply(rho.mat())));
    r.dbc_defect = dbc_asymmetry(m0, rho, true);
    r.dbc1_defect = dbc_asymmetry(m0, rho, false);
    return r;
}

cplx fgr_level_shift(const ComplexMatrix& k_op, std::size_t k_index,
                     const std::function<cplx(double)>& v,
                     const std::vector<double>& omega_grid)
{
    const HermitianEig eig = eig_hermitian(require_hermitian(k_op, "fgr_level_shift"));
    if (k_index >= eig.eigenvalues.size())
        throw ShapeMismatch("fgr_level_shift: eigenvalue index out of range");
    const double e = eig.eigenvalues[k_index];

    if (omega_grid.size() < 3) throw GridError("fgr_level_shift: grid too small");
    for (std::size_t i = 1; i < omega_grid.size(); ++i)
        if (omega_grid[i] <= omega_grid[i - 1])
            throw GridError("fgr_level_shift: grid not strictly increasing");
    const double a = omega_grid.front();
    const double b = omega_grid.back();
    if (e < omega_grid[1] || e > omega_grid[omega_grid.size() - 2])
        throw GridError("fgr_level_shift: level within one cell of the grid boundary");

    const auto g = [&](double xi) { return std::norm(v(xi)); };
    const double ge = g(e);
    // PV ∫ g(ξ)/(e−ξ) dξ with the singular part integrated analytically; the
    // subtracted integrand has the removable limit −g'(e) at the level itself
    const double dge = (g(e + 1e-6) - g(e - 1e-6)) / 2e-6;
    const double regular = integrate_adaptive(
        [&](double xi) {
            if (std::abs(e - xi) < 1e-7) return -dge;
            return (g(xi) - ge) / (e - xi);
        },
        a, b);
    const double pv = regular + ge * std::log((e - a) / (b - e));
    return cplx(pv, -M_PI * ge);
}

DensityMatrix invariant_state(const Superoperator& m_sch)
{
    const ComplexMatrix gram = m_sch.mat.adjoint() * m_sch.mat;
    const HermitianEig e = eig_hermitian(hermitize(gram));
    cvector x(m_sch.dim * m_sch.dim);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = e.eigenvectors(i, 0);
    const ComplexMatrix raw = unvec(x);

    ComplexMatrix cand = hermitize(raw);
    const ComplexMatrix alt = hermitize(cplx(0.0, 1.0) * raw);
    if (alt.frob_norm() > cand.frob_norm()) cand = alt;
    if (cand.trace().real() < 0.0) cand = cplx(-1.0, 0.0) * cand;

    // clip stray negative directions and renormalize
    ComplexMatrix psd = mat_fn(cand, [](double v) { return std::max(0.0, v); });
    const double tr = psd.trace().real();
    if (tr <= 1e-14)
        throw DomainError("invariant_state: kernel vector has no positive part");
    return DensityMatrix((1.0 / tr) * psd);
}

std::vector<WeakCouplingRow> weak_coupling_extract(const WeakCouplingModel& model,
                                                   const std::vector<double>& lambdas,
                                                   double t)
{
    const std::size_t ds = model.k_sys.dim();
    const FermionAlgebra alg = jordan_wigner(model.h_modes.dim());
    const std::size_t dr = alg.fock_dim();
    const std::vector<std::size_t> dims{ds, dr};

    const ComplexMatrix k = require_hermitian(model.k_sys, "weak_coupling k_sys");
    const ComplexMatrix h_res = alg.d_gamma(model.h_modes);
    const ComplexMatrix h_free = kron(k, ComplexMatrix::identity(dr)) +
                                 kron(ComplexMatrix::identity(ds), h_res);
    const ComplexMatrix phi = (1.0 / std::sqrt(2.0)) *
                              (alg.annihilator(model.f) + alg.creator(model.f));
    const ComplexMatrix v = kron(model.q_sys, phi);
    const DensityMatrix rho_res = gibbs(h_res, model.beta);
    const DensityMatrix rho_sys = gibbs(k, model.beta);

    const ComplexMatrix free_gen =
        cplx(0.0, -1.0) * (left_mult(k) - right_mult(k)); // Schrödinger −i[K,·]

    std::vector<WeakCouplingRow> rows;
    for (double lambda : lambdas) {
        WeakCouplingRow row{};
        row.lambda = lambda;
        row.generator.dim = ds;
        row.generator.picture = Picture::schroedinger;

        if (lambda == 0.0) {
            row.generator.mat = ComplexMatrix(ds * ds);
        } else {
            const double big_t = t / (lambda * lambda);
            const ComplexMatrix h_full = h_free + lambda * v;
            const ComplexMatrix u = mat_fn(
                h_full, [big_t](double x) { return std::exp(cplx(0.0, -big_t * x)); });
            const ComplexMatrix u_sys = mat_fn(
                k, [big_t](double x) { return std::exp(cplx(0.0, big_t * x)); });

            ComplexMatrix map(ds * ds);
            for (std::size_t i = 0; i < ds; ++i)
                for (std::size_t j = 0; j < ds; ++j) {
                    const ComplexMatrix in = kron(matrix_unit(ds, i, j), rho_res.mat());
                    const ComplexMatrix out =
                        u_sys * partial_trace(u * in * u.adjoint(), dims, {0}) *
                        u_sys.adjoint();
                    const cvector col = vec(out);
                    for (std::size_t r = 0; r < ds * ds; ++r)
                        map(r, j * ds + i) = col[r];
                }
            row.generator.mat = (1.0 / t) * logm(map);
        }

        const ComplexMatrix ups = extract_upsilon(row.generator);
        Superoperator m0;
        m0.dim = ds;
        m0.picture = Picture::heisenberg;
        m0.mat = row.generator.mat.adjoint() -
                 cplx(0.0, 1.0) * (left_mult(ups) - right_mult(ups));
        row.dbc_defect = dbc_asymmetry(m0, rho_sys, true);
        row.commutant_defect =
            (row.generator.mat * free_gen - free_gen * row.generator.mat).frob_norm();
        row.cauchy_diff =
            rows.empty() ? 0.0
                         : (row.generator.mat - rows.back().generator.mat).frob_norm();
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace qtherm
