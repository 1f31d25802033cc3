#include "dampedwave/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>

namespace dampedwave::kernels {

#if defined(__x86_64__) || defined(_M_X64)
namespace detail {
const KernelTable& avx2_impl_table();
}
#endif

const KernelTable* avx2_table() {
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return &detail::avx2_impl_table();
#endif
  return nullptr;
}

namespace {

const KernelTable* pick_default() {
  if (const char* env = std::getenv("DAMPEDWAVE_KERNELS")) {
    std::string want(env);
    if (want == "scalar") return &scalar_table();
    if (want == "avx2") {
      if (const KernelTable* t = avx2_table()) return t;
      throw std::runtime_error("DAMPEDWAVE_KERNELS=avx2 but CPU lacks AVX2/FMA");
    }
    // anything else, including "auto", falls through to detection
  }
  if (const KernelTable* t = avx2_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

const KernelTable& active() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (!t) {
    t = pick_default();
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

void select(const std::string& name) {
  if (name == "auto") {
    const KernelTable* t = avx2_table();
    g_active.store(t ? t : &scalar_table(), std::memory_order_release);
    return;
  }
  if (name == "scalar") {
    g_active.store(&scalar_table(), std::memory_order_release);
    return;
  }
  if (name == "avx2") {
    if (const KernelTable* t = avx2_table()) {
      g_active.store(t, std::memory_order_release);
      return;
    }
    throw std::runtime_error("kernel backend 'avx2' not supported on this CPU");
  }
  throw std::invalid_argument("unknown kernel backend: " + name);
}

std::vector<const KernelTable*> available_tables() {
  std::vector<const KernelTable*> out{&scalar_table()};
  if (const KernelTable* t = avx2_table()) out.push_back(t);
  return out;
}

}  // namespace dampedwave::kernels
