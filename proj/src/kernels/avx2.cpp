// AVX2/FMA kernel variants. This translation unit is compiled with -mavx2 -mfma
// and must only be entered through the dispatch table after a CPUID check, so
// it deliberately avoids instantiating standard-library templates that other
// translation units could share.

#include <immintrin.h>

#include <cmath>

#include "usvauv/kernels/kernels.hpp"

namespace usvauv::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  __m256d s2 = _mm256_setzero_pd();
  __m256d s3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1);
    s2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), s2);
    s3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), s3);
  }
  for (; i + 4 <= n; i += 4)
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
  double s = hsum(_mm256_add_pd(_mm256_add_pd(s0, s1), _mm256_add_pd(s2, s3)));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void lerp_avx2(double tau, const double* src, double* dst, std::size_t n) {
  const double keep = 1.0 - tau;
  const __m256d vt = _mm256_set1_pd(tau);
  const __m256d vk = _mm256_set1_pd(keep);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_mul_pd(vk, _mm256_loadu_pd(dst + i));
    _mm256_storeu_pd(dst + i, _mm256_fmadd_pd(vt, _mm256_loadu_pd(src + i), d));
  }
  for (; i < n; ++i) dst[i] = tau * src[i] + keep * dst[i];
}

void sub_scaled_diff_avx2(double coef, const double* a, const double* b, double* y,
                          std::size_t n) {
  const __m256d vc = _mm256_set1_pd(coef);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(y + i, _mm256_fnmadd_pd(vc, d, _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] -= coef * (a[i] - b[i]);
}

void relu_avx2(const double* x, double* y, std::size_t n) {
  const __m256d z = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    // keep exact +0.0 for non-positive inputs like the scalar path
    const __m256d mask = _mm256_cmp_pd(v, z, _CMP_GT_OQ);
    _mm256_storeu_pd(y + i, _mm256_and_pd(v, mask));
  }
  for (; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_backward_avx2(const double* act, double* grad, std::size_t n) {
  const __m256d z = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(act + i), z, _CMP_GT_OQ);
    _mm256_storeu_pd(grad + i, _mm256_and_pd(_mm256_loadu_pd(grad + i), mask));
  }
  for (; i < n; ++i)
    if (!(act[i] > 0.0)) grad[i] = 0.0;
}

// C[MR x n] += A(i, p) * B[p, :], where A(i, p) = a[i * ars + p * acs].
template <int MR>
void gemm_rows(const double* a, std::size_t ars, std::size_t acs, const double* b,
               double* c, std::size_t k, std::size_t n) {
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    __m256d lo[MR], hi[MR];
    for (int r = 0; r < MR; ++r) {
      lo[r] = _mm256_loadu_pd(c + r * n + j);
      hi[r] = _mm256_loadu_pd(c + r * n + j + 4);
    }
    for (std::size_t p = 0; p < k; ++p) {
      const __m256d b0 = _mm256_loadu_pd(b + p * n + j);
      const __m256d b1 = _mm256_loadu_pd(b + p * n + j + 4);
      for (int r = 0; r < MR; ++r) {
        const __m256d av = _mm256_broadcast_sd(a + r * ars + p * acs);
        lo[r] = _mm256_fmadd_pd(av, b0, lo[r]);
        hi[r] = _mm256_fmadd_pd(av, b1, hi[r]);
      }
    }
    for (int r = 0; r < MR; ++r) {
      _mm256_storeu_pd(c + r * n + j, lo[r]);
      _mm256_storeu_pd(c + r * n + j + 4, hi[r]);
    }
  }
  for (; j + 4 <= n; j += 4) {
    __m256d acc[MR];
    for (int r = 0; r < MR; ++r) acc[r] = _mm256_loadu_pd(c + r * n + j);
    for (std::size_t p = 0; p < k; ++p) {
      const __m256d b0 = _mm256_loadu_pd(b + p * n + j);
      for (int r = 0; r < MR; ++r)
        acc[r] = _mm256_fmadd_pd(_mm256_broadcast_sd(a + r * ars + p * acs), b0, acc[r]);
    }
    for (int r = 0; r < MR; ++r) _mm256_storeu_pd(c + r * n + j, acc[r]);
  }
  for (; j < n; ++j)
    for (int r = 0; r < MR; ++r) {
      double s = c[r * n + j];
      for (std::size_t p = 0; p < k; ++p) s += a[r * ars + p * acs] * b[p * n + j];
      c[r * n + j] = s;
    }
}

void gemm_strided(const double* a, std::size_t ars, std::size_t acs, const double* b,
                  double* c, std::size_t m, std::size_t k, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) gemm_rows<4>(a + i * ars, ars, acs, b, c + i * n, k, n);
  for (; i < m; ++i) gemm_rows<1>(a + i * ars, ars, acs, b, c + i * n, k, n);
}

void gemm_nn_acc_avx2(const double* a, const double* b, double* c, std::size_t m,
                      std::size_t k, std::size_t n) {
  gemm_strided(a, k, 1, b, c, m, k, n);
}

void gemm_tn_acc_avx2(const double* a, const double* b, double* c, std::size_t m,
                      std::size_t k, std::size_t n) {
  gemm_strided(a, 1, m, b, c, m, k, n);
}

void gemm_nt_acc_avx2(const double* a, const double* b, double* c, std::size_t m,
                      std::size_t k, std::size_t n) {
  if (k < 4) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = c[i * n + j];
        for (std::size_t p = 0; p < k; ++p) s += a[i * k + p] * b[j * k + p];
        c[i * n + j] = s;
      }
    return;
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a + i * k;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      const double* b0 = b + j * k;
      __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
      __m256d s2 = _mm256_setzero_pd(), s3 = _mm256_setzero_pd();
      std::size_t p = 0;
      for (; p + 4 <= k; p += 4) {
        const __m256d av = _mm256_loadu_pd(ai + p);
        s0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b0 + p), s0);
        s1 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b0 + k + p), s1);
        s2 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b0 + 2 * k + p), s2);
        s3 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b0 + 3 * k + p), s3);
      }
      // transpose-reduce the four accumulators into one vector of sums
      const __m256d h01 = _mm256_hadd_pd(s0, s1);
      const __m256d h23 = _mm256_hadd_pd(s2, s3);
      const __m256d sw = _mm256_permute2f128_pd(h01, h23, 0x21);
      const __m256d bl = _mm256_blend_pd(h01, h23, 0b1100);
      __m256d sums = _mm256_add_pd(sw, bl);
      double tail[4] = {0.0, 0.0, 0.0, 0.0};
      for (; p < k; ++p) {
        tail[0] += ai[p] * b0[p];
        tail[1] += ai[p] * b0[k + p];
        tail[2] += ai[p] * b0[2 * k + p];
        tail[3] += ai[p] * b0[3 * k + p];
      }
      sums = _mm256_add_pd(sums, _mm256_loadu_pd(tail));
      _mm256_storeu_pd(c + i * n + j, _mm256_add_pd(_mm256_loadu_pd(c + i * n + j), sums));
    }
    for (; j < n; ++j) c[i * n + j] += dot_avx2(ai, b + j * k, k);
  }
}

void adam_update_avx2(double* param, const double* grad, double* m1, double* m2,
                      std::size_t n, double lr, double beta1, double beta2, double bc1,
                      double bc2, double eps) {
  const __m256d vb1 = _mm256_set1_pd(beta1), vb1c = _mm256_set1_pd(1.0 - beta1);
  const __m256d vb2 = _mm256_set1_pd(beta2), vb2c = _mm256_set1_pd(1.0 - beta2);
  const __m256d vbc1 = _mm256_set1_pd(bc1), vbc2 = _mm256_set1_pd(bc2);
  const __m256d vlr = _mm256_set1_pd(lr), veps = _mm256_set1_pd(eps);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d g = _mm256_loadu_pd(grad + i);
    const __m256d a = _mm256_add_pd(_mm256_mul_pd(vb1, _mm256_loadu_pd(m1 + i)),
                                    _mm256_mul_pd(vb1c, g));
    const __m256d v = _mm256_add_pd(_mm256_mul_pd(vb2, _mm256_loadu_pd(m2 + i)),
                                    _mm256_mul_pd(_mm256_mul_pd(vb2c, g), g));
    _mm256_storeu_pd(m1 + i, a);
    _mm256_storeu_pd(m2 + i, v);
    const __m256d mhat = _mm256_div_pd(a, vbc1);
    const __m256d vhat = _mm256_div_pd(v, vbc2);
    const __m256d step =
        _mm256_div_pd(_mm256_mul_pd(vlr, mhat), _mm256_add_pd(_mm256_sqrt_pd(vhat), veps));
    _mm256_storeu_pd(param + i, _mm256_sub_pd(_mm256_loadu_pd(param + i), step));
  }
  for (; i < n; ++i) {
    m1[i] = beta1 * m1[i] + (1.0 - beta1) * grad[i];
    m2[i] = beta2 * m2[i] + (1.0 - beta2) * grad[i] * grad[i];
    param[i] -= lr * (m1[i] / bc1) / (std::sqrt(m2[i] / bc2) + eps);
  }
}

constexpr KernelTable kAvx2{
    Isa::Avx2,          dot_avx2,         axpy_avx2,          lerp_avx2,
    sub_scaled_diff_avx2, relu_avx2,      relu_backward_avx2, gemm_nn_acc_avx2,
    gemm_nt_acc_avx2,   gemm_tn_acc_avx2, adam_update_avx2,
};

}  // namespace

const KernelTable* avx2_table_impl() { return &kAvx2; }

}  // namespace usvauv::kernels
