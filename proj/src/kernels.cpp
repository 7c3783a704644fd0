#include "qtherm/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace qtherm::kernels {

void gemm_scalar(std::size_t n, const cplx* a, const cplx* b, cplx* c)
{
    std::memset(c, 0, n * n * sizeof(cplx));
    for (std::size_t i = 0; i < n; ++i) {
        const cplx* ai = a + i * n;
        cplx* ci = c + i * n;
        for (std::size_t k = 0; k < n; ++k) {
            const cplx aik = ai[k];
            if (aik == cplx(0.0, 0.0)) continue;
            const cplx* bk = b + k * n;
            for (std::size_t j = 0; j < n; ++j)
                ci[j] += aik * bk[j];
        }
    }
}

bool avx2_available()
{
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

Variant detect_variant()
{
    if (const char* env = std::getenv("QTHERM_KERNEL")) {
        std::string s(env);
        if (s == "scalar") return Variant::scalar;
        if (s == "avx2") {
            if (!avx2_available())
                throw std::runtime_error("QTHERM_KERNEL=avx2 requested but AVX2/FMA not available");
            return Variant::avx2;
        }
        throw std::runtime_error("QTHERM_KERNEL must be 'scalar' or 'avx2', got '" + s + "'");
    }
    return avx2_available() ? Variant::avx2 : Variant::scalar;
}

Variant& variant_slot()
{
    static Variant v = detect_variant();
    return v;
}

} // namespace

Variant active_variant() { return variant_slot(); }

void set_variant(Variant v)
{
    if (v == Variant::avx2 && !avx2_available())
        throw std::runtime_error("cannot select AVX2 kernels: not supported on this CPU");
    variant_slot() = v;
}

std::string variant_name(Variant v)
{
    return v == Variant::avx2 ? "avx2" : "scalar";
}

void gemm(std::size_t n, const cplx* a, const cplx* b, cplx* c)
{
    if (active_variant() == Variant::avx2)
        gemm_avx2(n, a, b, c);
    else
        gemm_scalar(n, a, b, c);
}

} // namespace qtherm::kernels
