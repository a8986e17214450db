#pragma once

// Data-parallel inner loops shared by the simplex tableau and the audit code.
//
// Each kernel has a scalar reference implementation and, where the target
// supports it, an AVX2 (x86-64) or NEON (aarch64) variant. The active table is
// chosen once at first use from the CPU's capabilities; setting the
// environment variable EDR_SIMD=scalar forces the reference path.
//
// axpy_sub and scale use a separate multiply then subtract/multiply per lane
// (no fused multiply-add), so every variant is bitwise identical to the
// scalar kernel. dot reassociates the sum and agrees only to rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace edr::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
    Isa isa;
    /// y[i] -= a * x[i]
    void (*axpy_sub)(double* y, const double* x, double a, std::size_t n) noexcept;
    /// y[i] *= a
    void (*scale)(double* y, double a, std::size_t n) noexcept;
    double (*dot)(const double* x, const double* y, std::size_t n) noexcept;
};

const KernelTable& scalar_kernels() noexcept;

/// Kernel table for `isa`, or nullptr when it is not compiled in or the
/// running CPU lacks the instructions.
const KernelTable* kernels_for(Isa isa) noexcept;

/// The table selected for this process.
const KernelTable& active_kernels() noexcept;

inline void axpy_sub(std::span<double> y, std::span<const double> x, double a) noexcept
{
    active_kernels().axpy_sub(y.data(), x.data(), a, y.size());
}

inline void scale(std::span<double> y, double a) noexcept
{
    active_kernels().scale(y.data(), a, y.size());
}

inline double dot(std::span<const double> x, std::span<const double> y) noexcept
{
    return active_kernels().dot(x.data(), y.data(), x.size());
}

}  // namespace edr::simd
