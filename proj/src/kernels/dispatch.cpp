#include "driveloop/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "driveloop/error.hpp"

namespace driveloop::kernels {
namespace {

std::atomic<const Ops*> g_ops{nullptr};
std::atomic<Backend> g_backend{Backend::Scalar};

Backend initial_backend() {
  if (const char* env = std::getenv("DRIVELOOP_KERNELS")) {
    std::string v(env);
    if (v == "scalar") return Backend::Scalar;
    if (v == "avx2") {
      if (!avx2_supported())
        throw ConfigError("DRIVELOOP_KERNELS=avx2 but this CPU lacks AVX2/FMA");
      return Backend::Avx2;
    }
    // Anything else (including "auto") falls through to detection.
  }
  return avx2_supported() ? Backend::Avx2 : Backend::Scalar;
}

const Ops* table_for(Backend b) {
#if defined(__x86_64__) || defined(_M_X64)
  if (b == Backend::Avx2) return &kAvx2Ops;
#endif
  return &kScalarOps;
}

void ensure_init() {
  if (g_ops.load(std::memory_order_acquire) == nullptr) {
    Backend b = initial_backend();
    g_backend.store(b, std::memory_order_relaxed);
    g_ops.store(table_for(b), std::memory_order_release);
  }
}

}  // namespace

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops& ops() {
  ensure_init();
  return *g_ops.load(std::memory_order_acquire);
}

Backend active_backend() {
  ensure_init();
  return g_backend.load(std::memory_order_relaxed);
}

std::string_view backend_name(Backend b) {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

void force_backend(Backend b) {
  if (b == Backend::Avx2 && !avx2_supported())
    throw ConfigError("AVX2 backend requested but not supported on this CPU");
  g_backend.store(b, std::memory_order_relaxed);
  g_ops.store(table_for(b), std::memory_order_release);
}

}  // namespace driveloop::kernels
