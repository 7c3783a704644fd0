#include "qtherm/complex_matrix.hpp"

#include <cmath>
#include <string>

#include "qtherm/kernels.hpp"

namespace qtherm {

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o)
{
    if (o.d_ != d_) throw ShapeMismatch("matrix addition: dim mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o)
{
    if (o.d_ != d_) throw ShapeMismatch("matrix subtraction: dim mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s)
{
    for (auto& v : a_) v *= s;
    return *this;
}

ComplexMatrix ComplexMatrix::adjoint() const
{
    ComplexMatrix r(d_);
    for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = 0; j < d_; ++j)
            r(j, i) = std::conj((*this)(i, j));
    return r;
}

ComplexMatrix ComplexMatrix::transpose() const
{
    ComplexMatrix r(d_);
    for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = 0; j < d_; ++j)
            r(j, i) = (*this)(i, j);
    return r;
}

ComplexMatrix ComplexMatrix::conj() const
{
    ComplexMatrix r(d_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = std::conj(a_[i]);
    return r;
}

cplx ComplexMatrix::trace() const
{
    cplx t = 0.0;
    for (std::size_t i = 0; i < d_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frob_norm() const
{
    double s = 0.0;
    for (const auto& v : a_) s += std::norm(v);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const
{
    double m = 0.0;
    for (const auto& v : a_) m = std::max(m, std::abs(v));
    return m;
}

double ComplexMatrix::one_norm() const
{
    double m = 0.0;
    for (std::size_t j = 0; j < d_; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < d_; ++i) s += std::abs((*this)(i, j));
        m = std::max(m, s);
    }
    return m;
}

bool ComplexMatrix::is_finite() const
{
    for (const auto& v : a_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b)
{
    ComplexMatrix r = a;
    r += b;
    return r;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b)
{
    ComplexMatrix r = a;
    r -= b;
    return r;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.dim() != b.dim()) throw ShapeMismatch("matrix product: dim mismatch");
    ComplexMatrix c(a.dim());
    kernels::gemm(a.dim(), a.data(), b.data(), c.data());
    return c;
}

ComplexMatrix operator*(cplx s, const ComplexMatrix& a)
{
    ComplexMatrix r = a;
    r *= s;
    return r;
}

ComplexMatrix operator*(const ComplexMatrix& a, cplx s) { return s * a; }
ComplexMatrix operator*(double s, const ComplexMatrix& a) { return cplx(s, 0.0) * a; }
ComplexMatrix operator*(const ComplexMatrix& a, double s) { return cplx(s, 0.0) * a; }

cvector operator*(const ComplexMatrix& a, const cvector& x)
{
    if (a.dim() != x.size()) throw ShapeMismatch("matvec: dim mismatch");
    cvector y(x.size(), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < a.dim(); ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < a.dim(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double vec_norm(const cvector& x)
{
    double s = 0.0;
    for (const auto& v : x) s += std::norm(v);
    return std::sqrt(s);
}

double hermiticity_defect(const ComplexMatrix& a)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            s += std::norm(a(i, j) - std::conj(a(j, i)));
    return std::sqrt(s);
}

ComplexMatrix hermitize(const ComplexMatrix& a)
{
    ComplexMatrix r(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            r(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    return r;
}

ComplexMatrix require_hermitian(const ComplexMatrix& a, const char* what, double tol_rel)
{
    const double defect = hermiticity_defect(a);
    const double scale = a.frob_norm();
    if (defect > tol_rel * std::max(scale, 1e-300) && defect > 1e-14)
        throw NotHermitian(std::string(what) + ": hermiticity defect " +
                           std::to_string(defect) + " exceeds tolerance");
    return hermitize(a);
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b)
{
    return a * b - b * a;
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b)
{
    return a * b + b * a;
}

} // namespace qtherm
