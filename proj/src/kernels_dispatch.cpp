#include <atomic>

#include "spincorr/kernels.hpp"

namespace spincorr::kernels {

namespace detail {
const Backend* avx2_backend_impl();
}

const Backend* avx2_backend() {
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2")) {
    return detail::avx2_backend_impl();
  }
#endif
  return nullptr;
}

namespace {
std::atomic<const Backend*> g_override{nullptr};
}

void set_backend(const Backend* backend) { g_override.store(backend); }

const Backend& active_backend() {
  if (const Backend* forced = g_override.load()) return *forced;
  if (const Backend* simd = avx2_backend()) return *simd;
  return scalar_backend();
}

const Backend* backend_by_name(const std::string& name) {
  if (name == "scalar") return &scalar_backend();
  if (name == "avx2") return avx2_backend();
  if (name == "auto") return nullptr;
  return nullptr;
}

}  // namespace spincorr::kernels
