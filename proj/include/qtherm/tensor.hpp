#pragma once

#include <cstddef>
#include <vector>

#include "qtherm/complex_matrix.hpp"

namespace qtherm {

// Global dimension cap for tensor assembly (exact-diagonalization budget).
// Default 4096 = 2^12; CLI can lower it per run.
std::size_t max_tensor_dim();
void set_max_tensor_dim(std::size_t d);

// Kronecker product; OverflowError beyond the configured cap.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Partial trace over the factors NOT listed in `keep`.  `dims` are the factor
// dimensions in tensor order (their product must equal dim(A)); the result is
// ordered by the kept factors in their original order.  `keep` must be
// strictly increasing.
ComplexMatrix partial_trace(const ComplexMatrix& a, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep);

// Embed an operator living on the factors `sites` (in increasing order, with
// op's tensor ordering matching that order) into the full product space with
// factor dimensions `dims`, tensoring identity elsewhere.
ComplexMatrix embed(const ComplexMatrix& op, const std::vector<std::size_t>& dims,
                    const std::vector<std::size_t>& sites);

// Column-stacking vectorization (the library-wide superoperator convention):
// vec(X)[j*d + i] = X(i,j), so that vec(A X B) = (Bᵀ ⊗ A) vec(X).
cvector vec(const ComplexMatrix& x);
ComplexMatrix unvec(const cvector& v);

// Left/right multiplication superoperators in the column-stacking convention:
// left_mult(A) = 1 ⊗ A (X ↦ AX), right_mult(B) = Bᵀ ⊗ 1 (X ↦ XB).
ComplexMatrix left_mult(const ComplexMatrix& a);
ComplexMatrix right_mult(const ComplexMatrix& b);

// Pauli matrices and friends.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
// Multi-site Pauli string, e.g. "XXI" ↦ σ_x ⊗ σ_x ⊗ 1 (characters I,X,Y,Z).
ComplexMatrix pauli_string(const std::string& s);

} // namespace qtherm
