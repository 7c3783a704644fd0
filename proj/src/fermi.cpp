#include "qtherm/fermi.hpp"

#include <cmath>

#include "qtherm/eig.hpp"
#include "qtherm/mat_fn.hpp"
#include "qtherm/tensor.hpp"

namespace qtherm {

namespace {

ComplexMatrix sigma_minus()
{
    ComplexMatrix m(2);
    m(1, 0) = 1.0;
    return m;
}

} // namespace

cvector FermionAlgebra::vacuum() const
{
    cvector v(fock_dim(), cplx(0.0, 0.0));
    v[fock_dim() - 1] = 1.0;
    return v;
}

ComplexMatrix FermionAlgebra::annihilator(const cvector& f) const
{
    if (f.size() != n_modes) throw ShapeMismatch("annihilator: mode count mismatch");
    ComplexMatrix m(fock_dim());
    for (std::size_t k = 0; k < n_modes; ++k) m += std::conj(f[k]) * a[k];
    return m;
}

ComplexMatrix FermionAlgebra::creator(const cvector& f) const
{
    if (f.size() != n_modes) throw ShapeMismatch("creator: mode count mismatch");
    ComplexMatrix m(fock_dim());
    for (std::size_t k = 0; k < n_modes; ++k) m += f[k] * a[k].adjoint();
    return m;
}

ComplexMatrix FermionAlgebra::d_gamma(const ComplexMatrix& h) const
{
    if (h.dim() != n_modes) throw ShapeMismatch("d_gamma: mode count mismatch");
    ComplexMatrix m(fock_dim());
    for (std::size_t j = 0; j < n_modes; ++j)
        for (std::size_t k = 0; k < n_modes; ++k)
            if (std::abs(h(j, k)) > 0.0) m += h(j, k) * (a[j].adjoint() * a[k]);
    return m;
}

ComplexMatrix FermionAlgebra::gamma(const ComplexMatrix& u) const
{
    const ComplexMatrix h = cplx(0.0, -1.0) * logm(u);
    return expm(cplx(0.0, 1.0) * d_gamma(hermitize(h)));
}

FermionAlgebra jordan_wigner(std::size_t n)
{
    if (n > 12) throw OverflowError("jordan_wigner: more than 12 modes");
    FermionAlgebra alg;
    alg.n_modes = n;
    for (std::size_t k = 0; k < n; ++k) {
        ComplexMatrix op = ComplexMatrix::identity(1);
        for (std::size_t j = 0; j < n; ++j) {
            if (j < k)
                op = kron(op, pauli_z());
            else if (j == k)
                op = kron(op, sigma_minus());
            else
                op = kron(op, ComplexMatrix::identity(2));
        }
        alg.a.push_back(op);
    }
    return alg;
}

QuasiFreeState quasi_free_state(const FermionAlgebra& alg, const ComplexMatrix& t_symbol)
{
    const ComplexMatrix t = require_hermitian(t_symbol, "quasi_free_state symbol");
    if (t.dim() != alg.n_modes)
        throw ShapeMismatch("quasi_free_state: symbol dimension mismatch");
    const HermitianEig e = eig_hermitian(t);
    const std::size_t d = alg.fock_dim();
    const ComplexMatrix id = ComplexMatrix::identity(d);

    ComplexMatrix rho = id;
    for (std::size_t k = 0; k < alg.n_modes; ++k) {
        double nk = e.eigenvalues[k];
        if (nk < -1e-12 || nk > 1.0 + 1e-12)
            throw SymbolRangeError("quasi_free_state: symbol spectrum outside [0,1]");
        nk = std::min(1.0, std::max(0.0, nk));
        cvector mode(alg.n_modes);
        for (std::size_t j = 0; j < alg.n_modes; ++j) mode[j] = e.eigenvectors(j, k);
        const ComplexMatrix b = alg.annihilator(mode);
        const ComplexMatrix num = b.adjoint() * b;
        rho = rho * (nk * num + (1.0 - nk) * (id - num));
    }
    QuasiFreeState s;
    s.symbol = t;
    s.rho = DensityMatrix(hermitize(rho));
    return s;
}

cplx characteristic_fn(const QuasiFreeState& state, const ComplexMatrix& u)
{
    const std::size_t n = state.symbol.dim();
    if (u.dim() != n) throw ShapeMismatch("characteristic_fn: unitary dimension mismatch");
    ComplexMatrix m = ComplexMatrix::identity(n) +
                      (u - ComplexMatrix::identity(n)) * state.symbol;
    // det via LU; lu_solve is overkill, so do the elimination inline
    cplx det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(c, j), m(piv, j));
            det = -det;
        }
        det *= m(c, c);
        if (std::abs(m(c, c)) == 0.0) return 0.0;
        for (std::size_t r = c + 1; r < n; ++r) {
            const cplx fac = m(r, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j) m(r, j) -= fac * m(c, j);
        }
    }
    return det;
}

cplx characteristic_fn_trace(const FermionAlgebra& alg, const QuasiFreeState& state,
                             const ComplexMatrix& u)
{
    return (state.rho.mat() * alg.gamma(u)).trace();
}

double quasi_free_dynamics_check(const FermionAlgebra& alg, const ComplexMatrix& h,
                                 double t)
{
    const ComplexMatrix big_h = alg.d_gamma(require_hermitian(h, "quasi_free_dynamics"));
    const ComplexMatrix u =
        mat_fn(big_h, [t](double x) { return std::exp(cplx(0.0, t * x)); });
    const ComplexMatrix u_mode =
        mat_fn(h, [t](double x) { return std::exp(cplx(0.0, t * x)); });

    double defect = 0.0;
    // mode basis plus one mixing vector spans enough directions by linearity
    std::vector<cvector> family;
    for (std::size_t k = 0; k < alg.n_modes; ++k) {
        cvector f(alg.n_modes, cplx(0.0, 0.0));
        f[k] = 1.0;
        family.push_back(f);
    }
    cvector mix(alg.n_modes);
    for (std::size_t k = 0; k < alg.n_modes; ++k)
        mix[k] = cplx(1.0, 0.3 * static_cast<double>(k + 1)) /
                 std::sqrt(static_cast<double>(alg.n_modes));
    family.push_back(mix);

    for (const auto& f : family) {
        const ComplexMatrix lhs = u * alg.creator(f) * u.adjoint();
        const ComplexMatrix rhs = alg.creator(u_mode * f);
        defect = std::max(defect, (lhs - rhs).frob_norm());
    }
    return defect;
}

ComplexMatrix ArakiWyssRep::pi_annihilator(const cvector& f) const
{
    const std::size_t n = symbol.dim();
    cvector left(2 * n, cplx(0.0, 0.0));
    cvector right(2 * n, cplx(0.0, 0.0));
    const cvector lf = sqrt_1mt * f;
    const cvector rf = sqrt_t * f;
    for (std::size_t k = 0; k < n; ++k) {
        left[k] = lf[k];
        right[n + k] = std::conj(rf[k]);
    }
    return doubled.annihilator(left) + doubled.creator(right);
}

ComplexMatrix ArakiWyssRep::pi_creator(const cvector& f) const
{
    return pi_annihilator(f).adjoint();
}

ComplexMatrix ArakiWyssRep::log_delta() const
{
    const std::size_t n = symbol.dim();
    const ComplexMatrix s =
        mat_fn(symbol, [](double x) { return std::log(x / (1.0 - x)); });
    ComplexMatrix m(2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = s(i, j);
            m(n + i, n + j) = -std::conj(s(i, j));
        }
    return doubled.d_gamma(hermitize(m));
}

ComplexMatrix ArakiWyssRep::delta() const
{
    return mat_fn(log_delta(), [](double x) { return std::exp(x); });
}

ArakiWyssRep araki_wyss_rep(const ComplexMatrix& t_symbol)
{
    const ComplexMatrix t = require_hermitian(t_symbol, "araki_wyss_rep symbol");
    const HermitianEig e = eig_hermitian(t);
    if (e.eigenvalues.front() < 1e-10 || e.eigenvalues.back() > 1.0 - 1e-10)
        throw SymbolRangeError("araki_wyss_rep: symbol must satisfy 0 < T < 1");

    ArakiWyssRep rep;
    rep.doubled = jordan_wigner(2 * t.dim());
    rep.symbol = t;
    rep.sqrt_t = mat_fn(t, [](double x) { return std::sqrt(x); });
    rep.sqrt_1mt = mat_fn(t, [](double x) { return std::sqrt(1.0 - x); });
    rep.omega_vec = rep.doubled.vacuum();
    return rep;
}

} // namespace qtherm
