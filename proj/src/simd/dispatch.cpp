#include <stdexcept>

#include "kerrphc/simd/kernels.hpp"

namespace kerrphc::simd {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(KERRPHC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa best_isa() { return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

const Kernels& kernels_for(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument("kernel variant not available on this machine: " +
                                std::string(isa_name(isa)));
  }
  switch (isa) {
#if defined(KERRPHC_HAVE_AVX2)
    case Isa::avx2:
      return detail::kAvx2Kernels;
#endif
    default:
      return detail::kScalarKernels;
  }
}

const Kernels& kernels() {
  static const Kernels& active = kernels_for(best_isa());
  return active;
}

}  // namespace kerrphc::simd
