// Compiled with -mavx2. Nothing here may run before the dispatcher has
// confirmed AVX2 support on the executing CPU.

#include "kernels_internal.hpp"

#include <immintrin.h>

namespace edr::simd::detail {
namespace {

void axpy_sub_avx2(double* y, const double* x, double a, std::size_t n) noexcept
{
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d y0 = _mm256_loadu_pd(y + i);
        __m256d y1 = _mm256_loadu_pd(y + i + 4);
        const __m256d p0 = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        const __m256d p1 = _mm256_mul_pd(va, _mm256_loadu_pd(x + i + 4));
        y0 = _mm256_sub_pd(y0, p0);
        y1 = _mm256_sub_pd(y1, p1);
        _mm256_storeu_pd(y + i, y0);
        _mm256_storeu_pd(y + i + 4, y1);
    }
    for (; i + 4 <= n; i += 4) {
        const __m256d p = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_sub_pd(_mm256_loadu_pd(y + i), p));
    }
    for (; i < n; ++i) {
        const double p = a * x[i];
        y[i] -= p;
    }
}

void scale_avx2(double* y, double a, std::size_t n) noexcept
{
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(y + i), va));
    }
    for (; i < n; ++i) {
        y[i] *= a;
    }
}

double dot_avx2(const double* x, const double* y, std::size_t n) noexcept
{
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
        acc1 = _mm256_add_pd(acc1,
                             _mm256_mul_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
    double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) {
        sum += x[i] * y[i];
    }
    return sum;
}

constexpr KernelTable kAvx2{Isa::Avx2, &axpy_sub_avx2, &scale_avx2, &dot_avx2};

}  // namespace

const KernelTable& avx2_kernels() noexcept
{
    return kAvx2;
}

}  // namespace edr::simd::detail
