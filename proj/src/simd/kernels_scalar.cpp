#include <cmath>
#include <stdexcept>

#include "kerrphc/simd/kernels.hpp"

namespace kerrphc::simd {
namespace {

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernel span size mismatch");
}

void sincos_scalar(std::span<const double> x, std::span<double> s, std::span<double> c) {
  check_sizes(x.size(), s.size());
  check_sizes(x.size(), c.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    s[i] = std::sin(x[i]);
    c[i] = std::cos(x[i]);
  }
}

void dispersion_rhs_scalar(const CellPhases& cell, std::span<const double> x,
                           std::span<double> out) {
  check_sizes(x.size(), out.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = cell.alpha * x[i];
    const double b = cell.beta * x[i];
    out[i] = std::cos(a) * std::cos(b) - cell.mix * std::sin(a) * std::sin(b);
  }
}

double layer_energy_scalar(const LayerWave& wave, std::span<const double> z,
                           std::span<const double> w) {
  check_sizes(z.size(), w.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const std::complex<double> fwd = std::polar(1.0, wave.wavenumber * z[i]);
    const std::complex<double> e = wave.plus * fwd + wave.minus * std::conj(fwd);
    const std::complex<double> b = wave.plus * fwd - wave.minus * std::conj(fwd);
    sum += w[i] * (wave.e_weight * std::norm(e) + wave.b_weight * std::norm(b));
  }
  return sum;
}

}  // namespace

namespace detail {
const Kernels kScalarKernels{Isa::scalar, &sincos_scalar, &dispersion_rhs_scalar,
                             &layer_energy_scalar};
}  // namespace detail

}  // namespace kerrphc::simd
