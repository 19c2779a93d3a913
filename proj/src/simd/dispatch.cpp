#include <cstdlib>
#include <string_view>

#include "kqet/simd/kernels.hpp"

namespace kqet::simd {

#if KQET_HAVE_AVX2
extern const KernelSet kAvx2Kernels;
#endif

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

const KernelSet* kernels_for(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar:
      return &scalar_kernels();
    case Isa::kAvx2:
#if KQET_HAVE_AVX2
      __builtin_cpu_init();
      if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return &kAvx2Kernels;
      }
#endif
      return nullptr;
  }
  return nullptr;
}

namespace {

const KernelSet& select() noexcept {
  if (const char* forced = std::getenv("KQET_SIMD")) {
    if (std::string_view(forced) == "scalar") return scalar_kernels();
  }
  if (const KernelSet* k = kernels_for(Isa::kAvx2)) return *k;
  return scalar_kernels();
}

}  // namespace

const KernelSet& kernels() noexcept {
  static const KernelSet& selected = select();
  return selected;
}

}  // namespace kqet::simd
