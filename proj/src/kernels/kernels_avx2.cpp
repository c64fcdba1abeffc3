// AVX2 variants. Compiled with -mavx2 only; deliberately no FMA so the
// elementwise kernels and axpy-ordered matmuls match the scalar reference
// bit for bit. dot (and the dot-based matmul_nt) use vector accumulators,
// so they re-associate the reduction; equivalence tests bound them instead.

#include "nuggetbench/kernels/kernels.hpp"

#if defined(NB_HAVE_AVX2)

#include <immintrin.h>

namespace nb::kernels::avx2 {

namespace {

void add_impl(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] + b[i];
}

void sub_impl(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

void mul_impl(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void scale_impl(const double* a, double s, double* out, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), vs));
  }
  for (; i < n; ++i) out[i] = a[i] * s;
}

void axpy_impl(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

double dot_impl(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) total += a[i] * b[i];
  return total;
}

void matmul_nn_acc_impl(const double* A, const double* B, double* C, std::size_t m,
                        std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* c_row = C + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      axpy_impl(A[i * k + p], B + p * n, c_row, n);
    }
  }
}

void matmul_tn_acc_impl(const double* A, const double* B, double* C, std::size_t k,
                        std::size_t m, std::size_t n) {
  for (std::size_t p = 0; p < k; ++p) {
    const double* b_row = B + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      axpy_impl(A[p * m + i], b_row, C + i * n, n);
    }
  }
}

void matmul_nt_acc_impl(const double* A, const double* B, double* C, std::size_t m,
                        std::size_t n, std::size_t k) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* a_row = A + i * k;
    for (std::size_t j = 0; j < n; ++j) {
      C[i * n + j] += dot_impl(a_row, B + j * k, k);
    }
  }
}

}  // namespace

const Backend backend = {
    "avx2",          add_impl,          sub_impl,          mul_impl,
    scale_impl,      axpy_impl,         dot_impl,          matmul_nn_acc_impl,
    matmul_tn_acc_impl, matmul_nt_acc_impl,
};

}  // namespace nb::kernels::avx2

#endif  // NB_HAVE_AVX2
