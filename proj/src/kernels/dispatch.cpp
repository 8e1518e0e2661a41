#include <cstdlib>
#include <string_view>

#include "rptopic/kernels.hpp"

namespace rptopic::kernels {

#if RPTOPIC_HAVE_AVX2
const KernelTable& avx2_table();
#endif

const KernelTable* avx2() {
#if RPTOPIC_HAVE_AVX2
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* env = std::getenv("RPTOPIC_SIMD");
    if (env && std::string_view(env) == "scalar") return scalar();
    if (const KernelTable* t = avx2()) return *t;
    return scalar();
  }();
  return chosen;
}

}  // namespace rptopic::kernels
