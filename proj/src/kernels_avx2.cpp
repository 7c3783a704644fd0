// AVX2+FMA complex GEMM variant.  This translation unit is compiled with
// -mavx2 -mfma; callers must check avx2_available() before dispatching here.

#include "qtherm/kernels.hpp"

#include <cstring>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#endif

namespace qtherm::kernels {

#if defined(__x86_64__) || defined(__i386__)

void gemm_avx2(std::size_t n, const cplx* a, const cplx* b, cplx* c)
{
    std::memset(c, 0, n * n * sizeof(cplx));
    const double* bd = reinterpret_cast<const double*>(b);
    double* cd = reinterpret_cast<double*>(c);
    const std::size_t vec_end = (n / 2) * 2; // complex pairs per 256-bit lane

    for (std::size_t i = 0; i < n; ++i) {
        const cplx* ai = a + i * n;
        double* ci = cd + 2 * i * n;
        for (std::size_t k = 0; k < n; ++k) {
            const double ar = ai[k].real();
            const double aim = ai[k].imag();
            if (ar == 0.0 && aim == 0.0) continue;
            const double* bk = bd + 2 * k * n;
            const __m256d arv = _mm256_set1_pd(ar);
            const __m256d aiv = _mm256_set1_pd(aim);
            std::size_t j = 0;
            for (; j < vec_end; j += 2) {
                // two complex entries of row k of B: [br0, bi0, br1, bi1]
                const __m256d bv = _mm256_loadu_pd(bk + 2 * j);
                const __m256d bsw = _mm256_permute_pd(bv, 0b0101); // [bi0, br0, bi1, br1]
                // (ar + i*ai)(br + i*bi) = (ar*br - ai*bi) + i(ar*bi + ai*br)
                const __m256d prod = _mm256_addsub_pd(_mm256_mul_pd(arv, bv),
                                                      _mm256_mul_pd(aiv, bsw));
                const __m256d cv = _mm256_loadu_pd(ci + 2 * j);
                _mm256_storeu_pd(ci + 2 * j, _mm256_add_pd(cv, prod));
            }
            for (; j < n; ++j) {
                const double br = bk[2 * j], bi = bk[2 * j + 1];
                ci[2 * j] += ar * br - aim * bi;
                ci[2 * j + 1] += ar * bi + aim * br;
            }
        }
    }
}

#else

void gemm_avx2(std::size_t n, const cplx* a, const cplx* b, cplx* c)
{
    gemm_scalar(n, a, b, c);
}

#endif

} // namespace qtherm::kernels
