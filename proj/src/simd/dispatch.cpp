#include <cstdlib>
#include <string_view>

#include "bikefleet/simd/kernels.hpp"

namespace bikefleet::simd {

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", &detail::chord2_scalar, &detail::min_update_scalar,
                                 &detail::argmin2_scalar};
  return table;
}

const KernelTable* avx2_kernels() {
#if defined(BIKEFLEET_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  static const KernelTable table{"avx2", &detail::chord2_avx2, &detail::min_update_avx2, &detail::argmin2_avx2};
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable& table = [&]() -> const KernelTable& {
    const char* env = std::getenv("BIKEFLEET_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return *t;
    return scalar_kernels();
  }();
  return table;
}

}  // namespace bikefleet::simd
