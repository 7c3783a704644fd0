#include "qtherm/mat_fn.hpp"

#include <cmath>
#include <string>

namespace qtherm {

ComplexMatrix mat_fn_complex(const HermitianEig& eig, const std::function<cplx(double)>& f)
{
    const std::size_t n = eig.eigenvalues.size();
    ComplexMatrix w = eig.eigenvectors; // V · diag(f(λ))
    for (std::size_t j = 0; j < n; ++j) {
        const cplx fj = f(eig.eigenvalues[j]);
        if (!std::isfinite(fj.real()) || !std::isfinite(fj.imag()))
            throw DomainError("mat_fn: function undefined at eigenvalue " +
                              std::to_string(eig.eigenvalues[j]));
        for (std::size_t i = 0; i < n; ++i) w(i, j) *= fj;
    }
    return w * eig.eigenvectors.adjoint();
}

ComplexMatrix mat_fn_complex(const ComplexMatrix& a, const std::function<cplx(double)>& f)
{
    return mat_fn_complex(eig_hermitian(a), f);
}

ComplexMatrix mat_fn_real(const HermitianEig& eig, const std::function<double(double)>& f)
{
    // Real f on a Hermitian argument: symmetrize the result to remove the
    // last bits of round-off asymmetry.
    ComplexMatrix r = mat_fn_complex(eig, [&f](double x) { return cplx(f(x), 0.0); });
    return hermitize(r);
}

ComplexMatrix mat_fn_real(const ComplexMatrix& a, const std::function<double(double)>& f)
{
    return mat_fn_real(eig_hermitian(a), f);
}

ComplexMatrix lu_solve(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.dim() != b.dim()) throw ShapeMismatch("lu_solve: dim mismatch");
    const std::size_t n = a.dim();
    ComplexMatrix lu = a;
    ComplexMatrix x = b;
    std::vector<std::size_t> piv(n);

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu(i, k)) > best) {
                best = std::abs(lu(i, k));
                p = i;
            }
        if (best < 1e-300) throw DomainError("lu_solve: singular matrix");
        piv[k] = p;
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(lu(k, j), lu(p, j));
                std::swap(x(k, j), x(p, j));
            }
        const cplx inv = 1.0 / lu(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx m = lu(i, k) * inv;
            lu(i, k) = m;
            for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= m * lu(k, j);
            for (std::size_t j = 0; j < n; ++j) x(i, j) -= m * x(k, j);
        }
    }
    // Back substitution.
    for (std::size_t kk = n; kk-- > 0;) {
        const cplx inv = 1.0 / lu(kk, kk);
        for (std::size_t j = 0; j < n; ++j) {
            cplx s = x(kk, j);
            for (std::size_t m = kk + 1; m < n; ++m) s -= lu(kk, m) * x(m, j);
            x(kk, j) = s * inv;
        }
    }
    return x;
}

ComplexMatrix inverse(const ComplexMatrix& a)
{
    return lu_solve(a, ComplexMatrix::identity(a.dim()));
}

ComplexMatrix expm(const ComplexMatrix& a)
{
    // Padé [13/13] with scaling-and-squaring.
    static const double b[14] = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0, 129060195264000.0, 10559470521600.0,
        670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
        960960.0, 16380.0, 182.0, 1.0};
    const double theta13 = 5.371920351148152;
    const std::size_t n = a.dim();
    const ComplexMatrix id = ComplexMatrix::identity(n);

    int s = 0;
    const double nrm = a.one_norm();
    if (nrm > theta13) s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
    if (s > 60) throw OverflowError("expm: scaling exponent too large (norm " +
                                    std::to_string(nrm) + ")");
    ComplexMatrix as = std::pow(0.5, s) * a;

    const ComplexMatrix a2 = as * as;
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix a6 = a4 * a2;

    ComplexMatrix u = as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
                            b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    ComplexMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
                      b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

    ComplexMatrix r = lu_solve(v - u, v + u);
    for (int i = 0; i < s; ++i) r = r * r;
    return r;
}

namespace {

// Denman–Beavers iteration for the principal matrix square root.
ComplexMatrix sqrtm_db(const ComplexMatrix& a)
{
    ComplexMatrix y = a;
    ComplexMatrix z = ComplexMatrix::identity(a.dim());
    for (int it = 0; it < 60; ++it) {
        const ComplexMatrix yinv = inverse(y);
        const ComplexMatrix zinv = inverse(z);
        const ComplexMatrix yn = 0.5 * (y + zinv);
        const ComplexMatrix zn = 0.5 * (z + yinv);
        const double delta = (yn - y).frob_norm();
        y = yn;
        z = zn;
        if (delta <= 1e-14 * std::max(1.0, y.frob_norm())) return y;
    }
    throw ConvergenceFailure("sqrtm: Denman–Beavers iteration did not converge");
}

} // namespace

ComplexMatrix logm(const ComplexMatrix& a)
{
    const std::size_t n = a.dim();
    // Branch-cut guard: principal log undefined on the closed negative real
    // axis.  Report rather than rotate.
    const cvector ev = eigvals_general(a);
    double scale = 0.0;
    for (const auto& l : ev) scale = std::max(scale, std::abs(l));
    for (const auto& l : ev) {
        if (std::abs(l) <= 1e-14 * std::max(scale, 1.0))
            throw LogBranchError("logm: (near-)singular matrix, eigenvalue ~0");
        if (l.real() <= 0.0 && std::abs(l.imag()) <= 1e-12 * (std::abs(l) + 1.0))
            throw LogBranchError("logm: eigenvalue on the negative real axis");
    }

    ComplexMatrix b = a;
    const ComplexMatrix id = ComplexMatrix::identity(n);
    int s = 0;
    while ((b - id).one_norm() > 0.3) {
        if (s >= 50)
            throw ConvergenceFailure("logm: inverse scaling did not contract");
        b = sqrtm_db(b);
        ++s;
    }

    // Gauss–Legendre partial-fraction Padé of log(1+X), 8 nodes on [0,1].
    static const double gl_x[8] = {
        0.5 - 0.4801449282487681 , 0.5 - 0.3983332387068134,
        0.5 - 0.2627662049581645 , 0.5 - 0.0917173212478249,
        0.5 + 0.0917173212478249 , 0.5 + 0.2627662049581645,
        0.5 + 0.3983332387068134 , 0.5 + 0.4801449282487681};
    static const double gl_w[8] = {
        0.0506142681451881 , 0.1111905172266872, 0.1568533229389436,
        0.1813418916891810 , 0.1813418916891810, 0.1568533229389436,
        0.1111905172266872 , 0.0506142681451881};

    const ComplexMatrix x = b - id;
    ComplexMatrix lg(n);
    for (int j = 0; j < 8; ++j)
        lg += gl_w[j] * lu_solve(id + gl_x[j] * x, x);
    return std::pow(2.0, s) * lg;
}

} // namespace qtherm
