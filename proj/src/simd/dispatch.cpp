#include "edr/simd/kernels.hpp"
#include "kernels_internal.hpp"

#include <cstdlib>
#include <string>

namespace edr::simd {
namespace {

bool cpu_has(Isa isa) noexcept
{
    switch (isa) {
    case Isa::Scalar:
        return true;
    case Isa::Avx2:
#if defined(EDR_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    case Isa::Neon:
#if defined(EDR_HAVE_NEON_TU)
        return true;  // mandatory on aarch64
#else
        return false;
#endif
    }
    return false;
}

const KernelTable& select_kernels() noexcept
{
    if (const char* forced = std::getenv("EDR_SIMD")) {
        const std::string want{forced};
        if (want == "scalar") {
            return scalar_kernels();
        }
        if (want == "avx2" || want == "neon") {
            const KernelTable* t = kernels_for(want == "avx2" ? Isa::Avx2 : Isa::Neon);
            return t != nullptr ? *t : scalar_kernels();
        }
    }
    if (const KernelTable* t = kernels_for(Isa::Avx2)) {
        return *t;
    }
    if (const KernelTable* t = kernels_for(Isa::Neon)) {
        return *t;
    }
    return scalar_kernels();
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept
{
    switch (isa) {
    case Isa::Scalar:
        return "scalar";
    case Isa::Avx2:
        return "avx2";
    case Isa::Neon:
        return "neon";
    }
    return "unknown";
}

const KernelTable* kernels_for(Isa isa) noexcept
{
    if (!cpu_has(isa)) {
        return nullptr;
    }
    switch (isa) {
    case Isa::Scalar:
        return &scalar_kernels();
    case Isa::Avx2:
#if defined(EDR_HAVE_AVX2_TU)
        return &detail::avx2_kernels();
#else
        return nullptr;
#endif
    case Isa::Neon:
#if defined(EDR_HAVE_NEON_TU)
        return &detail::neon_kernels();
#else
        return nullptr;
#endif
    }
    return nullptr;
}

const KernelTable& active_kernels() noexcept
{
    static const KernelTable& table = select_kernels();
    return table;
}

}  // namespace edr::simd
