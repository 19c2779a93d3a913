#pragma once

// State-vector inner loops. Each kernel has a portable scalar reference
// implementation and, on x86-64, an AVX2+FMA variant compiled in its own
// translation unit. The variant is picked once at startup from CPUID; the
// environment variable KQET_SIMD=scalar forces the reference path.

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>

namespace kqet::simd {

using cplx = std::complex<double>;

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa) noexcept;

struct KernelSet {
  Isa isa;

  // out[b ^ x_mask] += coeff * (-1)^popcount(b & z_mask) * in[b] for all b.
  void (*pauli_accumulate)(std::span<cplx> out, std::span<const cplx> in,
                           std::uint64_t x_mask, std::uint64_t z_mask,
                           cplx coeff);

  // sum_b conj(a[b]) * b[b]
  cplx (*inner_product)(std::span<const cplx> a, std::span<const cplx> b);

  // y += alpha * x
  void (*axpy)(cplx alpha, std::span<const cplx> x, std::span<cplx> y);

  // sum_b |a[b]|^2
  double (*norm_squared)(std::span<const cplx> a);
};

const KernelSet& scalar_kernels() noexcept;

/// nullptr when the host CPU (or the build) lacks the instruction set.
const KernelSet* kernels_for(Isa isa) noexcept;

/// The dispatched kernel set used by the library.
const KernelSet& kernels() noexcept;

}  // namespace kqet::simd
