#include "qtherm/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qtherm {

namespace {

// Householder reduction of a Hermitian matrix to complex tridiagonal form,
// accumulating the unitary similarity in q (a := q† a_in q tridiagonal).
void tridiagonalize(ComplexMatrix& a, ComplexMatrix& q)
{
    const std::size_t n = a.dim();
    q = ComplexMatrix::identity(n);
    if (n < 3) return;

    cvector v(n), u(n), w(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        // x = a[k+1..n-1, k]; build the reflector v annihilating x below x0.
        double xnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) xnorm2 += std::norm(a(i, k));
        const double xnorm = std::sqrt(xnorm2);
        if (xnorm < 1e-300) continue;

        const cplx x0 = a(k + 1, k);
        const cplx alpha = (std::abs(x0) > 0.0) ? cplx(-(x0 / std::abs(x0)) * xnorm)
                                                : cplx(-xnorm, 0.0);
        std::fill(v.begin(), v.end(), cplx(0.0, 0.0));
        for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
        v[k + 1] -= alpha;
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
        if (vnorm2 < 1e-300) continue;
        const double vinv = 1.0 / std::sqrt(vnorm2);
        for (std::size_t i = k + 1; i < n; ++i) v[i] *= vinv;

        // Hermitian two-sided update: A := A − 2(v u† + u v†),
        // u = A v − (v† A v) v.
        for (std::size_t i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
            u[i] = s;
        }
        cplx c = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) c += std::conj(v[i]) * u[i];
        for (std::size_t i = 0; i < n; ++i) u[i] -= c * v[i];
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vi = v[i], ui = u[i];
            for (std::size_t j = 0; j < n; ++j)
                a(i, j) -= 2.0 * (vi * std::conj(u[j]) + ui * std::conj(v[j]));
        }

        // Q := Q (1 − 2 v v†).
        for (std::size_t i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += q(i, j) * v[j];
            w[i] = s;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const cplx wi = 2.0 * w[i];
            for (std::size_t j = k + 1; j < n; ++j)
                q(i, j) -= wi * std::conj(v[j]);
        }
    }
}

// Implicit QL with Wilkinson shifts on a real symmetric tridiagonal
// (diagonal d, off-diagonal e with e[i] linking i and i+1), rotations
// accumulated into the complex column basis z.
void tql_implicit(std::vector<double>& d, std::vector<double>& e, ComplexMatrix& z)
{
    const std::size_t n = d.size();
    if (n == 0) return;
    const double eps = std::numeric_limits<double>::epsilon();

    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 50)
                    throw ConvergenceFailure("eig_hermitian: QL iteration limit exceeded");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                std::size_t i = m;
                while (i-- > l) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (std::size_t k = 0; k < z.dim(); ++k) {
                        const cplx zf = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * zf;
                        z(k, i) = c * z(k, i) - s * zf;
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

} // namespace

HermitianEig eig_hermitian(const ComplexMatrix& a_in)
{
    ComplexMatrix a = require_hermitian(a_in, "eig_hermitian");
    const std::size_t n = a.dim();

    HermitianEig out;
    out.eigenvalues.resize(n);
    if (n == 0) {
        out.eigenvectors = ComplexMatrix(0);
        return out;
    }
    if (n == 1) {
        out.eigenvalues[0] = a(0, 0).real();
        out.eigenvectors = ComplexMatrix::identity(1);
        return out;
    }

    ComplexMatrix q;
    tridiagonalize(a, q);

    // Rotate the complex sub-diagonal onto the positive real axis with a
    // diagonal phase matrix folded into q.
    std::vector<double> d(n), e(n, 0.0);
    cplx phase(1.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = a(i, i).real();
        if (i > 0) {
            const cplx ei = a(i, i - 1);
            const double mag = std::abs(ei);
            if (mag > 0.0) phase *= ei / mag;
            e[i - 1] = mag;
            for (std::size_t k = 0; k < n; ++k) q(k, i) *= phase;
        }
    }

    tql_implicit(d, e, q);

    // Sort ascending, permuting eigenvector columns accordingly.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });
    out.eigenvectors = ComplexMatrix(n);
    for (std::size_t c = 0; c < n; ++c) {
        out.eigenvalues[c] = d[idx[c]];
        for (std::size_t r = 0; r < n; ++r)
            out.eigenvectors(r, c) = q(r, idx[c]);
    }
    return out;
}

namespace {

// Householder reduction of a general complex matrix to upper Hessenberg form
// (in place, eigenvalues preserved; transforms not accumulated).
void hessenberg(ComplexMatrix& h)
{
    const std::size_t n = h.dim();
    if (n < 3) return;
    cvector v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double xnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) xnorm2 += std::norm(h(i, k));
        const double xnorm = std::sqrt(xnorm2);
        if (xnorm < 1e-300) continue;
        const cplx x0 = h(k + 1, k);
        const cplx alpha = (std::abs(x0) > 0.0) ? cplx(-(x0 / std::abs(x0)) * xnorm)
                                                : cplx(-xnorm, 0.0);
        std::fill(v.begin(), v.end(), cplx(0.0, 0.0));
        for (std::size_t i = k + 1; i < n; ++i) v[i] = h(i, k);
        v[k + 1] -= alpha;
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
        if (vnorm2 < 1e-300) continue;
        const double vinv = 1.0 / std::sqrt(vnorm2);
        for (std::size_t i = k + 1; i < n; ++i) v[i] *= vinv;

        // Left: H := (1 − 2vv†) H.
        for (std::size_t j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * h(i, j);
            s *= 2.0;
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= v[i] * s;
        }
        // Right: H := H (1 − 2vv†).
        for (std::size_t i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * v[j];
            s *= 2.0;
            for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= s * std::conj(v[j]);
        }
    }
}

// Both roots of the 2×2 block [[a,b],[c,d]].
std::pair<cplx, cplx> eig2x2(cplx a, cplx b, cplx c, cplx d)
{
    const cplx tr = a + d;
    const cplx disc = std::sqrt((a - d) * (a - d) + 4.0 * b * c);
    return {0.5 * (tr + disc), 0.5 * (tr - disc)};
}

} // namespace

cvector eigvals_general(const ComplexMatrix& a)
{
    const std::size_t n = a.dim();
    cvector ev(n, cplx(0.0, 0.0));
    if (n == 0) return ev;
    if (n == 1) {
        ev[0] = a(0, 0);
        return ev;
    }

    ComplexMatrix h = a;
    hessenberg(h);
    const double eps = std::numeric_limits<double>::epsilon();
    const double scale = std::max(h.frob_norm(), 1e-300);

    std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;
    int iter = 0, total_iter = 0;
    const int max_total = 60 * static_cast<int>(n);

    while (hi >= 0) {
        // Deflation scan: zero negligible sub-diagonals in the active block.
        std::ptrdiff_t lo = hi;
        while (lo > 0) {
            const double sub = std::abs(h(lo, lo - 1));
            const double diag = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
            if (sub <= eps * std::max(diag, scale * 1e-3)) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            ev[hi] = h(hi, hi);
            --hi;
            iter = 0;
            continue;
        }
        if (lo == hi - 1) {
            auto [l1, l2] = eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
            ev[hi] = l1;
            ev[hi - 1] = l2;
            hi -= 2;
            iter = 0;
            continue;
        }

        if (++total_iter > max_total)
            throw ConvergenceFailure("eigvals_general: QR iteration limit exceeded");
        ++iter;

        // Wilkinson shift: trailing 2×2 eigenvalue closest to H(hi,hi);
        // exceptional shift every 10 stalled iterations.
        cplx mu;
        if (iter % 10 == 0) {
            mu = h(hi, hi) + cplx(std::abs(h(hi, hi - 1)), 0.0);
        } else {
            auto [l1, l2] = eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
            mu = (std::abs(l1 - h(hi, hi)) < std::abs(l2 - h(hi, hi))) ? l1 : l2;
        }

        // Explicit single-shift QR step on the active block via Givens
        // rotations: H − μ = QR, then H := RQ + μ.
        for (std::ptrdiff_t i = lo; i <= hi; ++i) h(i, i) -= mu;
        std::vector<std::pair<cplx, cplx>> rot(static_cast<std::size_t>(hi - lo));
        for (std::ptrdiff_t i = lo; i < hi; ++i) {
            const cplx ca = h(i, i), cb = h(i + 1, i);
            const double r = std::sqrt(std::norm(ca) + std::norm(cb));
            cplx c(1.0, 0.0), s(0.0, 0.0);
            if (r > 0.0) {
                c = ca / r;
                s = cb / r;
            }
            rot[static_cast<std::size_t>(i - lo)] = {c, s};
            // Rows i, i+1 := G · rows, G = [[c̄, s̄], [−s, c]].
            for (std::ptrdiff_t j = i; j <= hi; ++j) {
                const cplx t1 = h(i, j), t2 = h(i + 1, j);
                h(i, j) = std::conj(c) * t1 + std::conj(s) * t2;
                h(i + 1, j) = -s * t1 + c * t2;
            }
        }
        for (std::ptrdiff_t i = lo; i < hi; ++i) {
            const auto [c, s] = rot[static_cast<std::size_t>(i - lo)];
            // Columns i, i+1 := columns · G†.
            const std::ptrdiff_t rmax = std::min(i + 1, hi);
            for (std::ptrdiff_t k = lo; k <= rmax; ++k) {
                const cplx t1 = h(k, i), t2 = h(k, i + 1);
                h(k, i) = t1 * c + t2 * s;
                h(k, i + 1) = -t1 * std::conj(s) + t2 * std::conj(c);
            }
        }
        for (std::ptrdiff_t i = lo; i <= hi; ++i) h(i, i) += mu;
    }
    return ev;
}

} // namespace qtherm
