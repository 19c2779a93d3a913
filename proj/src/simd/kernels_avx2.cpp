// Compiled with -mavx2 -mfma. Nothing here may run before the dispatcher
// has confirmed CPU support.

#include <immintrin.h>

#include <bit>

#include "kqet/simd/kernels.hpp"

namespace kqet::simd {
namespace {

// Complex product of a broadcast scalar with two packed complex values.
inline __m256d cmul(__m256d coeff_re, __m256d coeff_im, __m256d v) {
  const __m256d swapped = _mm256_permute_pd(v, 0b0101);
  return _mm256_fmaddsub_pd(coeff_re, v, _mm256_mul_pd(coeff_im, swapped));
}

void pauli_accumulate_avx2(std::span<cplx> out, std::span<const cplx> in,
                           std::uint64_t x_mask, std::uint64_t z_mask,
                           cplx coeff) {
  const std::uint64_t dim = in.size();
  if (dim < 2) {
    for (std::uint64_t b = 0; b < dim; ++b) {
      const bool odd = std::popcount(b & z_mask) & 1;
      out[b ^ x_mask] += (odd ? -coeff : coeff) * in[b];
    }
    return;
  }
  const __m256d cre = _mm256_set1_pd(coeff.real());
  const __m256d cim = _mm256_set1_pd(coeff.imag());
  const bool swap_halves = x_mask & 1;
  const bool pair_flips = z_mask & 1;
  const auto* src = reinterpret_cast<const double*>(in.data());
  auto* dst = reinterpret_cast<double*>(out.data());

  // Output pair (j, j+1) reads input pair (j^x, (j^x)^1), which is one
  // aligned pair, possibly in swapped order.
  for (std::uint64_t j = 0; j < dim; j += 2) {
    const std::uint64_t base = (j ^ x_mask) & ~std::uint64_t{1};
    __m256d v = _mm256_loadu_pd(src + 2 * base);
    if (swap_halves) v = _mm256_permute2f128_pd(v, v, 0x01);
    const std::uint64_t s0 = j ^ x_mask;
    const bool odd0 = std::popcount(s0 & z_mask) & 1;
    const bool odd1 = odd0 ^ pair_flips;
    const double g0 = odd0 ? -1.0 : 1.0;
    const double g1 = odd1 ? -1.0 : 1.0;
    v = _mm256_mul_pd(v, _mm256_setr_pd(g0, g0, g1, g1));
    const __m256d acc = _mm256_loadu_pd(dst + 2 * j);
    _mm256_storeu_pd(dst + 2 * j, _mm256_add_pd(acc, cmul(cre, cim, v)));
  }
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

cplx inner_product_avx2(std::span<const cplx> a, std::span<const cplx> b) {
  const std::size_t n = a.size();
  const auto* pa = reinterpret_cast<const double*>(a.data());
  const auto* pb = reinterpret_cast<const double*>(b.data());
  // re lanes accumulate [ar*br, ai*bi]; im lanes accumulate [ar*bi, ai*br].
  __m256d re = _mm256_setzero_pd();
  __m256d im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    re = _mm256_fmadd_pd(va, vb, re);
    im = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0b0101), im);
  }
  // im holds [ar*bi, ai*br, ...]; the imaginary part is even minus odd.
  const __m256d sign = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
  double sum_re = hsum(re);
  double sum_im = hsum(_mm256_mul_pd(im, sign));
  for (; i < n; ++i) {
    sum_re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    sum_im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {sum_re, sum_im};
}

void axpy_avx2(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  const std::size_t n = x.size();
  const __m256d are = _mm256_set1_pd(alpha.real());
  const __m256d aim = _mm256_set1_pd(alpha.imag());
  const auto* px = reinterpret_cast<const double*>(x.data());
  auto* py = reinterpret_cast<double*>(y.data());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(px + 2 * i);
    const __m256d vy = _mm256_loadu_pd(py + 2 * i);
    _mm256_storeu_pd(py + 2 * i, _mm256_add_pd(vy, cmul(are, aim, vx)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double norm_squared_avx2(std::span<const cplx> a) {
  const std::size_t n = a.size();
  const auto* pa = reinterpret_cast<const double*>(a.data());
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(pa + 2 * i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::norm(a[i]);
  return s;
}

}  // namespace

extern const KernelSet kAvx2Kernels;
const KernelSet kAvx2Kernels{Isa::kAvx2, &pauli_accumulate_avx2,
                             &inner_product_avx2, &axpy_avx2,
                             &norm_squared_avx2};

}  // namespace kqet::simd
