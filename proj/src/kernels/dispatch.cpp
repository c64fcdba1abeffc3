#include <cstdlib>
#include <string>

#include "nuggetbench/core/error.hpp"
#include "nuggetbench/kernels/kernels.hpp"

namespace nb::kernels {

bool avx2_supported() {
#if defined(NB_HAVE_AVX2) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

namespace {

const Backend* resolve_backend() {
  const char* env = std::getenv("NUGGETBENCH_SIMD");
  std::string want = env ? env : "auto";
  if (want == "scalar") return &scalar::backend;
#if defined(NB_HAVE_AVX2)
  if (want == "avx2" || want == "auto") {
    if (avx2_supported()) return &avx2::backend;
    if (want == "avx2") return &scalar::backend;  // requested but unavailable
  }
#endif
  return &scalar::backend;
}

const Backend*& backend_slot() {
  static const Backend* slot = resolve_backend();
  return slot;
}

}  // namespace

const Backend& active() { return *backend_slot(); }

void force_backend(const std::string& name) {
  if (name == "scalar") {
    backend_slot() = &scalar::backend;
    return;
  }
#if defined(NB_HAVE_AVX2)
  if (name == "avx2") {
    if (!avx2_supported()) throw ConfigError("avx2 backend not supported on this CPU");
    backend_slot() = &avx2::backend;
    return;
  }
#endif
  throw ConfigError("unknown kernel backend: '" + name + "'");
}

}  // namespace nb::kernels
