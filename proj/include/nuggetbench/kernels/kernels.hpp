#pragma once

#include <cstddef>
#include <string>

namespace nb::kernels {

// Dense double-precision inner loops behind the tensor kernel. Every entry
// point has a scalar reference implementation and, on x86-64 with AVX2, a
// vectorized variant selected once at startup. Elementwise kernels and the
// axpy-ordered matmuls are bit-identical across variants (no FMA, same
// per-element operation order); dot-reduction kernels differ only in
// accumulation order.
//
// All matrices are row-major, tightly packed.

struct Backend {
  const char* name;

  void (*add)(const double* a, const double* b, double* out, std::size_t n);
  void (*sub)(const double* a, const double* b, double* out, std::size_t n);
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);
  void (*scale)(const double* a, double s, double* out, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  // C(m x n) += A(m x k) * B(k x n)
  void (*matmul_nn_acc)(const double* A, const double* B, double* C, std::size_t m,
                        std::size_t k, std::size_t n);
  // C(m x n) += A^T * B with A stored (k x m), B (k x n)
  void (*matmul_tn_acc)(const double* A, const double* B, double* C, std::size_t k,
                        std::size_t m, std::size_t n);
  // C(m x n) += A * B^T with A (m x k), B (n x k)
  void (*matmul_nt_acc)(const double* A, const double* B, double* C, std::size_t m,
                        std::size_t n, std::size_t k);
};

namespace scalar {
extern const Backend backend;
}

#if defined(NB_HAVE_AVX2)
namespace avx2 {
extern const Backend backend;
}
#endif

// True when the running CPU can execute the AVX2 variant.
bool avx2_supported();

// Active backend. Resolved once: NUGGETBENCH_SIMD=scalar|avx2|auto (default
// auto) then CPU capability. Requesting avx2 on an unsupported CPU falls
// back to scalar.
const Backend& active();

// Test hook; replaces the active backend for the rest of the process.
// Throws ConfigError for an unknown name or an unsupported variant.
void force_backend(const std::string& name);

inline void add(const double* a, const double* b, double* out, std::size_t n) {
  active().add(a, b, out, n);
}
inline void sub(const double* a, const double* b, double* out, std::size_t n) {
  active().sub(a, b, out, n);
}
inline void mul(const double* a, const double* b, double* out, std::size_t n) {
  active().mul(a, b, out, n);
}
inline void scale(const double* a, double s, double* out, std::size_t n) {
  active().scale(a, s, out, n);
}
inline void axpy(double a, const double* x, double* y, std::size_t n) {
  active().axpy(a, x, y, n);
}
inline double dot(const double* a, const double* b, std::size_t n) {
  return active().dot(a, b, n);
}
inline void matmul_nn_acc(const double* A, const double* B, double* C, std::size_t m,
                          std::size_t k, std::size_t n) {
  active().matmul_nn_acc(A, B, C, m, k, n);
}
inline void matmul_tn_acc(const double* A, const double* B, double* C, std::size_t k,
                          std::size_t m, std::size_t n) {
  active().matmul_tn_acc(A, B, C, k, m, n);
}
inline void matmul_nt_acc(const double* A, const double* B, double* C, std::size_t m,
                          std::size_t n, std::size_t k) {
  active().matmul_nt_acc(A, B, C, m, n, k);
}

}  // namespace nb::kernels
