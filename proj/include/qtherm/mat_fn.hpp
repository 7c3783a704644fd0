#pragma once

#include <functional>
#include <type_traits>

#include "qtherm/complex_matrix.hpp"
#include "qtherm/eig.hpp"

namespace qtherm {

// Spectral calculus f(A) = V f(λ) V† for Hermitian A.  Real-valued f yields a
// Hermitian (symmetrized) result; complex-valued f is used for e^{itH},
// fractional powers with complex exponents, etc.  DomainError if f is
// undefined at an eigenvalue (signalled by a non-finite value).
ComplexMatrix mat_fn_real(const ComplexMatrix& a, const std::function<double(double)>& f);
ComplexMatrix mat_fn_complex(const ComplexMatrix& a, const std::function<cplx(double)>& f);
ComplexMatrix mat_fn_real(const HermitianEig& eig, const std::function<double(double)>& f);
ComplexMatrix mat_fn_complex(const HermitianEig& eig, const std::function<cplx(double)>& f);

// Convenience front end deducing real vs complex from the callable.
template <typename M, typename F>
ComplexMatrix mat_fn(const M& a, F&& f)
{
    using R = std::invoke_result_t<F, double>;
    if constexpr (std::is_same_v<R, cplx>)
        return mat_fn_complex(a, std::function<cplx(double)>(std::forward<F>(f)));
    else
        return mat_fn_real(a, std::function<double(double)>(std::forward<F>(f)));
}

// Solve A X = B by LU with partial pivoting (general complex A).
ComplexMatrix lu_solve(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix inverse(const ComplexMatrix& a);

// General (non-Hermitian) matrix exponential: Padé 13 scaling-and-squaring.
ComplexMatrix expm(const ComplexMatrix& a);

// General matrix logarithm (principal branch) via inverse scaling-and-
// squaring: Denman–Beavers square roots + Gauss–Legendre partial-fraction
// Padé of log(1+X).  Throws LogBranchError if the spectrum touches the
// closed negative real axis — the failure is surfaced, never rotated away.
ComplexMatrix logm(const ComplexMatrix& a);

} // namespace qtherm
