#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qtherm/errors.hpp"

namespace qtherm {

using cplx = std::complex<double>;
using cvector = std::vector<cplx>;

// Dense square complex matrix, row-major.  The universal carrier for
// operators, states and superoperator blocks.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t d) : d_(d), a_(d * d, cplx(0.0, 0.0)) {}

    static ComplexMatrix identity(std::size_t d)
    {
        ComplexMatrix m(d);
        for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
        return m;
    }
    static ComplexMatrix zero(std::size_t d) { return ComplexMatrix(d); }
    static ComplexMatrix diag(const std::vector<double>& v)
    {
        ComplexMatrix m(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) m(i, i) = v[i];
        return m;
    }
    static ComplexMatrix diag(const cvector& v)
    {
        ComplexMatrix m(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) m(i, i) = v[i];
        return m;
    }

    std::size_t dim() const { return d_; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * d_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * d_ + j]; }

    cplx* data() { return a_.data(); }
    const cplx* data() const { return a_.data(); }

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cplx s);

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conj() const;

    cplx trace() const;
    double frob_norm() const;
    double max_abs() const;
    // Largest column sum of absolute values (induced 1-norm).
    double one_norm() const;

    bool is_finite() const;

private:
    std::size_t d_ = 0;
    cvector a_;
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, const ComplexMatrix& a);
ComplexMatrix operator*(const ComplexMatrix& a, cplx s);
ComplexMatrix operator*(double s, const ComplexMatrix& a);
ComplexMatrix operator*(const ComplexMatrix& a, double s);

cvector operator*(const ComplexMatrix& a, const cvector& x);

inline cplx inner(const cvector& x, const cvector& y)
{
    cplx s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

double vec_norm(const cvector& x);

// ‖A − A†‖_F and the symmetrized (A + A†)/2.
double hermiticity_defect(const ComplexMatrix& a);
ComplexMatrix hermitize(const ComplexMatrix& a);

// Throws NotHermitian unless ‖A − A†‖_F ≤ tol_rel·‖A‖_F (absolute fallback for
// near-zero matrices); returns the symmetrized matrix to suppress round-off
// drift downstream.
ComplexMatrix require_hermitian(const ComplexMatrix& a, const char* what,
                                double tol_rel = 1e-10);

// A commutator/anticommutator pair used all over the physics layers.
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

} // namespace qtherm
