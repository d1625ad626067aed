#include <atomic>
#include <cstdlib>
#include <cstring>

#include "snl/kernels.hpp"

namespace snl::kernels {

#if defined(SNL_HAVE_AVX2_TU)
const KernelTable& avx2Table();
#endif

namespace {

std::atomic<bool> g_forceScalar{false};

bool cpuHasAvx2() {
#if defined(SNL_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

bool envRequestsScalar() {
  const char* v = std::getenv("SNL_KERNELS");
  return v != nullptr && std::strcmp(v, "scalar") == 0;
}

}  // namespace

const KernelTable* avx2Kernels() {
#if defined(SNL_HAVE_AVX2_TU)
  static const bool supported = cpuHasAvx2();
  return supported ? &avx2Table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const bool envScalar = envRequestsScalar();
  if (envScalar || g_forceScalar.load(std::memory_order_relaxed)) return scalarKernels();
  const KernelTable* simd = avx2Kernels();
  return simd != nullptr ? *simd : scalarKernels();
}

void forceScalar(bool enabled) { g_forceScalar.store(enabled, std::memory_order_relaxed); }

}  // namespace snl::kernels
