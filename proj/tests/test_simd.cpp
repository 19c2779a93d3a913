#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "kqet/simd/kernels.hpp"

using kqet::simd::cplx;
using kqet::simd::Isa;
using kqet::simd::KernelSet;

namespace {

std::vector<cplx> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

const KernelSet* simd_or_skip() { return kqet::simd::kernels_for(Isa::kAvx2); }

}  // namespace

TEST(SimdKernels, ScalarAlwaysAvailable) {
  EXPECT_EQ(kqet::simd::scalar_kernels().isa, Isa::kScalar);
  EXPECT_NE(kqet::simd::kernels_for(Isa::kScalar), nullptr);
}

TEST(SimdKernels, PauliAccumulateMatchesScalar) {
  const KernelSet* v = simd_or_skip();
  if (v == nullptr) GTEST_SKIP() << "AVX2 unavailable";
  const KernelSet& s = kqet::simd::scalar_kernels();
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 8; ++n) {
    const std::size_t dim = std::size_t{1} << n;
    const auto in = random_vector(dim, rng);
    for (std::uint64_t x = 0; x < dim; ++x) {
      for (std::uint64_t z : {std::uint64_t{0}, std::uint64_t{1}, dim - 1, x ^ 1, (dim - 1) & 0x5}) {
        z &= dim - 1;
        const cplx coeff(0.3, -1.7);
        auto a = random_vector(dim, rng);
        auto b = a;
        s.pauli_accumulate(a, in, x, z, coeff);
        v->pauli_accumulate(b, in, x, z, coeff);
        for (std::size_t i = 0; i < dim; ++i) {
          EXPECT_NEAR(a[i].real(), b[i].real(), 1e-13) << "n=" << n << " x=" << x << " z=" << z;
          EXPECT_NEAR(a[i].imag(), b[i].imag(), 1e-13);
        }
      }
    }
  }
}

TEST(SimdKernels, ReductionsMatchScalar) {
  const KernelSet* v = simd_or_skip();
  if (v == nullptr) GTEST_SKIP() << "AVX2 unavailable";
  const KernelSet& s = kqet::simd::scalar_kernels();
  std::mt19937_64 rng(11);
  for (std::size_t dim : {1u, 2u, 3u, 4u, 7u, 64u, 257u}) {
    const auto a = random_vector(dim, rng);
    const auto b = random_vector(dim, rng);
    const cplx ps = s.inner_product(a, b), pv = v->inner_product(a, b);
    EXPECT_NEAR(ps.real(), pv.real(), 1e-11 * dim);
    EXPECT_NEAR(ps.imag(), pv.imag(), 1e-11 * dim);
    EXPECT_NEAR(s.norm_squared(a), v->norm_squared(a), 1e-11 * dim);

    auto y1 = b, y2 = b;
    s.axpy({0.5, 2.0}, a, y1);
    v->axpy({0.5, 2.0}, a, y2);
    for (std::size_t i = 0; i < dim; ++i) {
      EXPECT_NEAR(std::abs(y1[i] - y2[i]), 0.0, 1e-13);
    }
  }
}
