#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace qtherm::kernels {

using cplx = std::complex<double>;

enum class Variant { scalar, avx2 };

// Returns the kernel variant in use.  Auto-detected at first use
// (AVX2+FMA when the CPU supports it), overridable via the environment
// variable QTHERM_KERNEL=scalar|avx2 or set_variant().
Variant active_variant();
void set_variant(Variant v);
std::string variant_name(Variant v);

// Dense row-major complex matrix product C = A*B for n×n blocks.
// C must not alias A or B.
void gemm(std::size_t n, const cplx* a, const cplx* b, cplx* c);

// Reference and SIMD implementations, exposed for equivalence testing.
void gemm_scalar(std::size_t n, const cplx* a, const cplx* b, cplx* c);
void gemm_avx2(std::size_t n, const cplx* a, const cplx* b, cplx* c);
bool avx2_available();

} // namespace qtherm::kernels
