#include <cmath>

#include "usvauv/kernels/kernels.hpp"

namespace usvauv::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void lerp_scalar(double tau, const double* src, double* dst, std::size_t n) {
  const double keep = 1.0 - tau;
  for (std::size_t i = 0; i < n; ++i) dst[i] = tau * src[i] + keep * dst[i];
}

void sub_scaled_diff_scalar(double coef, const double* a, const double* b, double* y,
                            std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] -= coef * (a[i] - b[i]);
}

void relu_scalar(const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_backward_scalar(const double* act, double* grad, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (!(act[i] > 0.0)) grad[i] = 0.0;
}

void gemm_nn_acc_scalar(const double* a, const double* b, double* c, std::size_t m,
                        std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * k + p];
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] += aip * b[p * n + j];
    }
}

void gemm_nt_acc_scalar(const double* a, const double* b, double* c, std::size_t m,
                        std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) c[i * n + j] += dot_scalar(a + i * k, b + j * k, k);
}

void gemm_tn_acc_scalar(const double* a, const double* b, double* c, std::size_t m,
                        std::size_t k, std::size_t n) {
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t i = 0; i < m; ++i) {
      const double api = a[p * m + i];
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] += api * b[p * n + j];
    }
}

void adam_update_scalar(double* param, const double* grad, double* m1, double* m2,
                        std::size_t n, double lr, double beta1, double beta2, double bc1,
                        double bc2, double eps) {
  for (std::size_t i = 0; i < n; ++i) {
    m1[i] = beta1 * m1[i] + (1.0 - beta1) * grad[i];
    m2[i] = beta2 * m2[i] + (1.0 - beta2) * grad[i] * grad[i];
    const double mhat = m1[i] / bc1;
    const double vhat = m2[i] / bc2;
    param[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

constexpr KernelTable kScalar{
    Isa::Scalar,          dot_scalar,         axpy_scalar,        lerp_scalar,
    sub_scaled_diff_scalar, relu_scalar,      relu_backward_scalar, gemm_nn_acc_scalar,
    gemm_nt_acc_scalar,   gemm_tn_acc_scalar, adam_update_scalar,
};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace usvauv::kernels
