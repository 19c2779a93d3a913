#include <bit>

#include "kqet/simd/kernels.hpp"

namespace kqet::simd {
namespace {

void pauli_accumulate_scalar(std::span<cplx> out, std::span<const cplx> in,
                             std::uint64_t x_mask, std::uint64_t z_mask,
                             cplx coeff) {
  const std::uint64_t dim = in.size();
  for (std::uint64_t b = 0; b < dim; ++b) {
    const bool odd = std::popcount(b & z_mask) & 1;
    out[b ^ x_mask] += (odd ? -coeff : coeff) * in[b];
  }
}

cplx inner_product_scalar(std::span<const cplx> a, std::span<const cplx> b) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

void axpy_scalar(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double norm_squared_scalar(std::span<const cplx> a) {
  double s = 0.0;
  for (const cplx& v : a) s += std::norm(v);
  return s;
}

constexpr KernelSet kScalar{Isa::kScalar, &pauli_accumulate_scalar,
                            &inner_product_scalar, &axpy_scalar,
                            &norm_squared_scalar};

}  // namespace

const KernelSet& scalar_kernels() noexcept { return kScalar; }

}  // namespace kqet::simd
