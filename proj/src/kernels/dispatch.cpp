#include <atomic>
#include <cstdlib>
#include <string_view>

#include "geotomo/kernels/kernels.hpp"

namespace geotomo::kernels {

#if defined(GEOTOMO_HAVE_AVX2)
const KernelTable& avx2KernelTable();
#endif

namespace {

bool cpuHasAvx2() {
#if defined(GEOTOMO_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* chooseDefault() {
  if (const char* env = std::getenv("GEOTOMO_SIMD"); env && std::string_view(env) == "scalar")
    return &scalarKernels();
  if (const KernelTable* t = avx2Kernels()) return t;
  return &scalarKernels();
}

std::atomic<const KernelTable*> forced{nullptr};

}  // namespace

const KernelTable* avx2Kernels() {
#if defined(GEOTOMO_HAVE_AVX2)
  static const bool ok = cpuHasAvx2();
  return ok ? &avx2KernelTable() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  if (const KernelTable* t = forced.load(std::memory_order_acquire)) return *t;
  static const KernelTable* chosen = chooseDefault();
  return *chosen;
}

void setActive(const KernelTable* table) { forced.store(table, std::memory_order_release); }

}  // namespace geotomo::kernels
