// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "fadas/kernels.hpp"

namespace fadas::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(FADAS_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Kernels* find(std::string_view name) {
  if (name == "scalar") return &scalar_kernels;
#if defined(FADAS_HAVE_AVX2_TU)
  if (name == "avx2" && cpu_has_avx2()) return &avx2_kernels;
#endif
#if defined(FADAS_HAVE_NEON_TU)
  if (name == "neon") return &neon_kernels;
#endif
  if (name == "auto") {
#if defined(FADAS_HAVE_AVX2_TU)
    if (cpu_has_avx2()) return &avx2_kernels;
#endif
#if defined(FADAS_HAVE_NEON_TU)
    return &neon_kernels;
#endif
    return &scalar_kernels;
  }
  return nullptr;
}

std::atomic<const Kernels*> g_active{nullptr};
std::once_flag g_init;

void init_from_env() {
  const char* env = std::getenv("FADAS_SIM_KERNEL");
  const Kernels* k = find(env ? std::string_view(env) : "auto");
  if (!k) k = find("auto");
  g_active.store(k, std::memory_order_release);
}

}  // namespace

const Kernels& active() {
  std::call_once(g_init, init_from_env);
  return *g_active.load(std::memory_order_acquire);
}

bool select(std::string_view name) {
  std::call_once(g_init, init_from_env);
  const Kernels* k = find(name);
  if (!k) return false;
  g_active.store(k, std::memory_order_release);
  return true;
}

std::vector<std::string> available() {
  std::vector<std::string> out{"scalar"};
#if defined(FADAS_HAVE_AVX2_TU)
  if (cpu_has_avx2()) out.emplace_back("avx2");
#endif
#if defined(FADAS_HAVE_NEON_TU)
  out.emplace_back("neon");
#endif
  return out;
}

}  // namespace fadas::kernels
