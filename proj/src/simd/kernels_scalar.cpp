#include "edr/simd/kernels.hpp"

namespace edr::simd {
namespace {

void axpy_sub_scalar(double* y, const double* x, double a, std::size_t n) noexcept
{
    for (std::size_t i = 0; i < n; ++i) {
        const double p = a * x[i];
        y[i] -= p;
    }
}

void scale_scalar(double* y, double a, std::size_t n) noexcept
{
    for (std::size_t i = 0; i < n; ++i) {
        y[i] *= a;
    }
}

double dot_scalar(const double* x, const double* y, std::size_t n) noexcept
{
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += x[i] * y[i];
    }
    return sum;
}

constexpr KernelTable kScalar{Isa::Scalar, &axpy_sub_scalar, &scale_scalar, &dot_scalar};

}  // namespace

const KernelTable& scalar_kernels() noexcept
{
    return kScalar;
}

}  // namespace edr::simd
