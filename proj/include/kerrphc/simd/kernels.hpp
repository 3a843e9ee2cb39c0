#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference
// implementation and, on x86-64, an AVX2+FMA variant picked at runtime.
// The two must agree to a few ulp; tests/test_kernels.cpp enforces it.

#include <complex>
#include <span>
#include <string_view>

namespace kerrphc::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

// True if the variant was compiled in and the running CPU supports it.
bool isa_available(Isa isa);

// Widest available variant.
Isa best_isa();

// Coefficients of the Kronig-Penney right-hand side in normalized
// frequency x = omega L / (2 pi c):
//   G(x) = cos(alpha x) cos(beta x) - mix sin(alpha x) sin(beta x)
struct CellPhases {
  double alpha = 0.0;
  double beta = 0.0;
  double mix = 1.0;
};

// One standing/travelling wave C+ e^{iKz} + C- e^{-iKz} inside a layer.
// The integrand is
//   e_weight |C+ e^{iKz} + C- e^{-iKz}|^2 + b_weight |C+ e^{iKz} - C- e^{-iKz}|^2
struct LayerWave {
  std::complex<double> plus;
  std::complex<double> minus;
  double wavenumber = 0.0;
  double e_weight = 1.0;
  double b_weight = 1.0;
};

struct Kernels {
  Isa isa;
  // s[i] = sin(x[i]), c[i] = cos(x[i]).
  void (*sincos)(std::span<const double> x, std::span<double> s, std::span<double> c);
  // out[i] = G(x[i]).
  void (*dispersion_rhs)(const CellPhases& cell, std::span<const double> x,
                         std::span<double> out);
  // sum_i w[i] * integrand(z[i]).
  double (*layer_energy)(const LayerWave& wave, std::span<const double> z,
                         std::span<const double> w);
};

const Kernels& kernels_for(Isa isa);

// kernels_for(best_isa()), resolved once.
const Kernels& kernels();

namespace detail {
extern const Kernels kScalarKernels;
#if defined(KERRPHC_HAVE_AVX2)
extern const Kernels kAvx2Kernels;
#endif
}  // namespace detail

}  // namespace kerrphc::simd
