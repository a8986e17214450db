#include "kernels_internal.hpp"

#include <arm_neon.h>

namespace edr::simd::detail {
namespace {

void axpy_sub_neon(double* y, const double* x, double a, std::size_t n) noexcept
{
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        // vmulq + vsubq rather than vfmsq keeps results identical to scalar
        const float64x2_t p = vmulq_f64(va, vld1q_f64(x + i));
        vst1q_f64(y + i, vsubq_f64(vld1q_f64(y + i), p));
    }
    for (; i < n; ++i) {
        const double p = a * x[i];
        y[i] -= p;
    }
}

void scale_neon(double* y, double a, std::size_t n) noexcept
{
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(y + i, vmulq_f64(vld1q_f64(y + i), va));
    }
    for (; i < n; ++i) {
        y[i] *= a;
    }
}

double dot_neon(const double* x, const double* y, std::size_t n) noexcept
{
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    }
    double sum = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; i < n; ++i) {
        sum += x[i] * y[i];
    }
    return sum;
}

constexpr KernelTable kNeon{Isa::Neon, &axpy_sub_neon, &scale_neon, &dot_neon};

}  // namespace

const KernelTable& neon_kernels() noexcept
{
    return kNeon;
}

}  // namespace edr::simd::detail
