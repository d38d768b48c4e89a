#pragma once

// Data-parallel inner loops shared by the MLP, the optimizers and the wave
// solver. Every kernel has a portable scalar reference implementation and,
// on x86-64, an AVX2/FMA variant. The variant is chosen once at runtime
// (CPUID) and can be overridden with USVAUV_ISA=scalar|avx2 or set_isa().
//
// All matrices are dense row-major doubles. The "acc" kernels accumulate
// into their output.

#include <cstddef>
#include <span>
#include <string_view>

namespace usvauv::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // dst = tau * src + (1 - tau) * dst
  void (*lerp)(double tau, const double* src, double* dst, std::size_t n);
  // y -= coef * (a - b)
  void (*sub_scaled_diff)(double coef, const double* a, const double* b, double* y,
                          std::size_t n);
  // y = max(x, 0)
  void (*relu)(const double* x, double* y, std::size_t n);
  // grad *= (act > 0)
  void (*relu_backward)(const double* act, double* grad, std::size_t n);
  // C[m x n] += A[m x k] * B[k x n]
  void (*gemm_nn_acc)(const double* a, const double* b, double* c, std::size_t m,
                      std::size_t k, std::size_t n);
  // C[m x n] += A[m x k] * B[n x k]^T
  void (*gemm_nt_acc)(const double* a, const double* b, double* c, std::size_t m,
                      std::size_t k, std::size_t n);
  // C[m x n] += A[k x m]^T * B[k x n]
  void (*gemm_tn_acc)(const double* a, const double* b, double* c, std::size_t m,
                      std::size_t k, std::size_t n);
  // One Adam moment update and parameter step (bias corrections precomputed).
  void (*adam_update)(double* param, const double* grad, double* m1, double* m2,
                      std::size_t n, double lr, double beta1, double beta2, double bc1,
                      double bc2, double eps);
};

const KernelTable& scalar_table();
// nullptr when the variant was not compiled in.
const KernelTable* avx2_table();

bool cpu_supports(Isa isa);
Isa best_isa();

// Active table; first call resolves USVAUV_ISA or CPU detection.
const KernelTable& active();
Isa active_isa();
// Throws std::invalid_argument if the CPU or build lacks the variant.
void set_isa(Isa isa);
Isa parse_isa(std::string_view name);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}
inline void lerp(double tau, std::span<const double> src, std::span<double> dst) {
  active().lerp(tau, src.data(), dst.data(), src.size());
}

}  // namespace usvauv::kernels
