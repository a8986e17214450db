#pragma once

#include "edr/simd/kernels.hpp"

namespace edr::simd::detail {

const KernelTable& avx2_kernels() noexcept;
const KernelTable& neon_kernels() noexcept;

}  // namespace edr::simd::detail
