#include <cstdlib>
#include <string_view>

#include "dce/kernels.hpp"

namespace dce::kernels {

#if defined(DCE_HAVE_AVX2)
namespace avx2 {
void reflection(const KernelParams& p, double x, std::span<const double> k,
                std::span<double> re, std::span<double> im);
void pair_kernel(const KernelParams& p, double x, double xp, std::span<const double> k,
                 std::span<double> out);
}  // namespace avx2
#endif

const KernelTable& scalar_table() {
    static const KernelTable table{Isa::scalar, "scalar", &scalar::reflection,
                                   &scalar::pair_kernel};
    return table;
}

const KernelTable* avx2_table() {
#if defined(DCE_HAVE_AVX2)
    static const bool supported = [] {
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    }();
    static const KernelTable table{Isa::avx2, "avx2", &avx2::reflection, &avx2::pair_kernel};
    return supported ? &table : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() {
    static const KernelTable& chosen = []() -> const KernelTable& {
        const char* forced = std::getenv("DCE_ISA");
        if (forced != nullptr && std::string_view(forced) == "scalar") return scalar_table();
        if (const auto* t = avx2_table()) return *t;
        return scalar_table();
    }();
    return chosen;
}

}  // namespace dce::kernels
