#include "adiabat/simd_kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace adiabat::simd {

#if defined(ADIABAT_HAVE_AVX2)
const KernelTable& avx2_table_impl() noexcept;
#endif

const KernelTable* avx2_kernels() noexcept
{
#if defined(ADIABAT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &avx2_table_impl() : nullptr;
#else
    return nullptr;
#endif
}

namespace {

const KernelTable* select_default() noexcept
{
    if (const char* forced = std::getenv("ADIABAT_SIMD"); forced != nullptr && std::string_view(forced) == "scalar") {
        return &scalar_kernels();
    }
    if (const KernelTable* wide = avx2_kernels()) {
        return wide;
    }
    return &scalar_kernels();
}

std::atomic<const KernelTable*>& slot() noexcept
{
    static std::atomic<const KernelTable*> current{select_default()};
    return current;
}

} // namespace

const KernelTable& active() noexcept { return *slot().load(std::memory_order_relaxed); }

void set_active(const KernelTable& table) noexcept { slot().store(&table, std::memory_order_relaxed); }

} // namespace adiabat::simd
