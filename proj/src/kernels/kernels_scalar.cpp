#include "nuggetbench/kernels/kernels.hpp"

namespace nb::kernels::scalar {

namespace {

void add_impl(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void sub_impl(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void mul_impl(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void scale_impl(const double* a, double s, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * s;
}

void axpy_impl(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

double dot_impl(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

// i-k-j order so the inner loop over j is an axpy; the AVX2 variant keeps
// the same accumulation order.
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
    "scalar",        add_impl,          sub_impl,          mul_impl,
    scale_impl,      axpy_impl,         dot_impl,          matmul_nn_acc_impl,
    matmul_tn_acc_impl, matmul_nt_acc_impl,
};

}  // namespace nb::kernels::scalar
