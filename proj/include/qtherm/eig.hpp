#pragma once

#include <vector>

#include "qtherm/complex_matrix.hpp"

namespace qtherm {

// Spectral decomposition A = V diag(λ) V† of a Hermitian matrix.
// Eigenvalues ascending; eigenvectors are the columns of V.
struct HermitianEig {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
};

// Householder tridiagonalization followed by implicit QL with Wilkinson
// shifts.  Throws NotHermitian if ‖A−A†‖_F > 1e−10·‖A‖_F; the input is
// symmetrized as (A+A†)/2 after the check to suppress round-off drift.
HermitianEig eig_hermitian(const ComplexMatrix& a);

// Eigenvalues (only) of a general complex matrix, via Hessenberg reduction
// and shifted QR iteration.  Unordered.  Used for branch-cut detection in
// matrix logarithms and spectral diagnostics of non-normal superoperators.
cvector eigvals_general(const ComplexMatrix& a);

} // namespace qtherm
