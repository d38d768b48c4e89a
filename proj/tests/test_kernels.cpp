#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "usvauv/kernels/kernels.hpp"

using namespace usvauv::kernels;

namespace {

std::vector<double> randv(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

const KernelTable* simd() {
  if (!avx2_table() || !cpu_supports(Isa::Avx2)) return nullptr;
  return avx2_table();
}

void expect_close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    EXPECT_NEAR(a[i], b[i], tol * (1.0 + std::abs(a[i]))) << "index " << i;
}

}  // namespace

TEST(Kernels, ScalarTableIsComplete) {
  const auto& t = scalar_table();
  EXPECT_EQ(t.isa, Isa::Scalar);
  EXPECT_TRUE(t.dot && t.axpy && t.lerp && t.sub_scaled_diff && t.relu && t.relu_backward &&
              t.gemm_nn_acc && t.gemm_nt_acc && t.gemm_tn_acc && t.adam_update);
}

TEST(Kernels, ParseIsa) {
  EXPECT_EQ(parse_isa("scalar"), Isa::Scalar);
  EXPECT_EQ(parse_isa("avx2"), Isa::Avx2);
  EXPECT_THROW(parse_isa("sse9"), std::invalid_argument);
}

TEST(Kernels, VectorOpsMatchScalarAcrossTails) {
  const KernelTable* v = simd();
  if (!v) GTEST_SKIP() << "AVX2 not available";
  const auto& s = scalar_table();
  std::mt19937_64 rng(7);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 17u, 31u, 64u, 129u, 1000u}) {
    const auto a = randv(n, rng), b = randv(n, rng);
    EXPECT_NEAR(s.dot(a.data(), b.data(), n), v->dot(a.data(), b.data(), n), 1e-12 * (1.0 + n));

    auto y1 = randv(n, rng), y2 = y1;
    s.axpy(0.37, a.data(), y1.data(), n);
    v->axpy(0.37, a.data(), y2.data(), n);
    expect_close(y1, y2, 1e-15);

    auto d1 = b, d2 = b;
    s.lerp(0.01, a.data(), d1.data(), n);
    v->lerp(0.01, a.data(), d2.data(), n);
    expect_close(d1, d2, 1e-15);

    auto e1 = y1, e2 = y1;
    s.sub_scaled_diff(0.4, a.data(), b.data(), e1.data(), n);
    v->sub_scaled_diff(0.4, a.data(), b.data(), e2.data(), n);
    expect_close(e1, e2, 1e-15);

    std::vector<double> r1(n), r2(n);
    s.relu(a.data(), r1.data(), n);
    v->relu(a.data(), r2.data(), n);
    EXPECT_EQ(r1, r2);

    auto g1 = b, g2 = b;
    s.relu_backward(a.data(), g1.data(), n);
    v->relu_backward(a.data(), g2.data(), n);
    EXPECT_EQ(g1, g2);
  }
}

TEST(Kernels, GemmVariantsMatchScalar) {
  const KernelTable* v = simd();
  if (!v) GTEST_SKIP() << "AVX2 not available";
  const auto& s = scalar_table();
  std::mt19937_64 rng(11);
  const std::size_t shapes[][3] = {{1, 1, 1}, {1, 8, 128}, {64, 8, 128}, {64, 128, 128}, {5, 3, 7},
                                   {13, 17, 9}, {64, 128, 2}, {64, 130, 1}, {3, 2, 12}};
  for (const auto& sh : shapes) {
    const std::size_t m = sh[0], k = sh[1], n = sh[2];
    const auto a = randv(m * k, rng), b = randv(k * n, rng), c0 = randv(m * n, rng);
    auto c1 = c0, c2 = c0;
    s.gemm_nn_acc(a.data(), b.data(), c1.data(), m, k, n);
    v->gemm_nn_acc(a.data(), b.data(), c2.data(), m, k, n);
    expect_close(c1, c2, 1e-12 * k);

    const auto bt = randv(n * k, rng);
    c1 = c0;
    c2 = c0;
    s.gemm_nt_acc(a.data(), bt.data(), c1.data(), m, k, n);
    v->gemm_nt_acc(a.data(), bt.data(), c2.data(), m, k, n);
    expect_close(c1, c2, 1e-12 * k);

    const auto at = randv(k * m, rng);
    c1 = c0;
    c2 = c0;
    s.gemm_tn_acc(at.data(), b.data(), c1.data(), m, k, n);
    v->gemm_tn_acc(at.data(), b.data(), c2.data(), m, k, n);
    expect_close(c1, c2, 1e-12 * k);
  }
}

TEST(Kernels, GemmScalarAgainstNaiveTriple) {
  std::mt19937_64 rng(3);
  const std::size_t m = 4, k = 5, n = 3;
  const auto a = randv(m * k, rng), b = randv(k * n, rng);
  std::vector<double> c(m * n, 0.0);
  scalar_table().gemm_nn_acc(a.data(), b.data(), c.data(), m, k, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double ref = 0.0;
      for (std::size_t p = 0; p < k; ++p) ref += a[i * k + p] * b[p * n + j];
      EXPECT_NEAR(c[i * n + j], ref, 1e-14);
    }
}

TEST(Kernels, AdamMatchesScalar) {
  const KernelTable* v = simd();
  if (!v) GTEST_SKIP() << "AVX2 not available";
  const auto& s = scalar_table();
  std::mt19937_64 rng(5);
  for (std::size_t n : {1u, 6u, 33u, 1000u}) {
    auto p1 = randv(n, rng), p2 = p1;
    std::vector<double> m1a(n, 0.0), m2a(n, 0.0), m1b(n, 0.0), m2b(n, 0.0);
    for (int t = 1; t <= 5; ++t) {
      const auto g = randv(n, rng);
      const double bc1 = 1.0 - std::pow(0.9, t), bc2 = 1.0 - std::pow(0.999, t);
      s.adam_update(p1.data(), g.data(), m1a.data(), m2a.data(), n, 1e-3, 0.9, 0.999, bc1, bc2, 1e-8);
      v->adam_update(p2.data(), g.data(), m1b.data(), m2b.data(), n, 1e-3, 0.9, 0.999, bc1, bc2, 1e-8);
    }
    expect_close(p1, p2, 1e-13);
    expect_close(m2a, m2b, 1e-13);
  }
}

TEST(Kernels, SetIsaSwitchesActiveTable) {
  const Isa before = active_isa();
  set_isa(Isa::Scalar);
  EXPECT_EQ(active().isa, Isa::Scalar);
  if (simd()) {
    set_isa(Isa::Avx2);
    EXPECT_EQ(active().isa, Isa::Avx2);
  }
  set_isa(before);
}
