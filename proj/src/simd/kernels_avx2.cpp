// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma
// and is only ever entered after a runtime CPU check.

#include <immintrin.h>

#include <array>
#include <cmath>
#include <stdexcept>

#include "kerrphc/simd/kernels.hpp"

namespace kerrphc::simd {
namespace {

constexpr std::size_t kLanes = 4;

// Beyond this the quadrant count no longer fits the int32 conversion and the
// three-term Cody-Waite reduction loses accuracy; such lanes take std::sin.
constexpr double kMaxReducedArgument = 1.0e6;

// pi/2 split into three parts (fdlibm rem_pio2).
constexpr double kTwoOverPi = 6.36619772367581382433e-01;
constexpr double kPio2Hi = 1.57079632673412561417e+00;
constexpr double kPio2Mid = 6.07710050630396597660e-11;
constexpr double kPio2Lo = 2.02226624879595063154e-21;

// Minimax coefficients on [-pi/4, pi/4] (fdlibm k_sin / k_cos).
constexpr double kS1 = -1.66666666666666324348e-01;
constexpr double kS2 = 8.33333333332248946124e-03;
constexpr double kS3 = -1.98412698298579493134e-04;
constexpr double kS4 = 2.75573137070700676789e-06;
constexpr double kS5 = -2.50507602534068634195e-08;
constexpr double kS6 = 1.58969099521155010221e-10;

constexpr double kC1 = 4.16666666666666019037e-02;
constexpr double kC2 = -1.38888888888741095749e-03;
constexpr double kC3 = 2.48015872894767294178e-05;
constexpr double kC4 = -2.75573143513906633035e-07;
constexpr double kC5 = 2.08757232129817482790e-09;
constexpr double kC6 = -1.13596475577881948265e-11;

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernel span size mismatch");
}

inline __m256d poly_sin(__m256d r, __m256d z) {
  __m256d p = _mm256_fmadd_pd(z, _mm256_set1_pd(kS6), _mm256_set1_pd(kS5));
  p = _mm256_fmadd_pd(z, p, _mm256_set1_pd(kS4));
  p = _mm256_fmadd_pd(z, p, _mm256_set1_pd(kS3));
  p = _mm256_fmadd_pd(z, p, _mm256_set1_pd(kS2));
  p = _mm256_fmadd_pd(z, p, _mm256_set1_pd(kS1));
  return _mm256_fmadd_pd(_mm256_mul_pd(z, r), p, r);
}

inline __m256d poly_cos(__m256d z) {
  __m256d p = _mm256_fmadd_pd(z, _mm256_set1_pd(kC6), _mm256_set1_pd(kC5));
  p = _mm256_fmadd_pd(z, p, _mm256_set1_pd(kC4));
  p = _mm256_fmadd_pd(z, p, _mm256_set1_pd(kC3));
  p = _mm256_fmadd_pd(z, p, _mm256_set1_pd(kC2));
  p = _mm256_fmadd_pd(z, p, _mm256_set1_pd(kC1));
  const __m256d z2 = _mm256_mul_pd(z, z);
  const __m256d half_z = _mm256_mul_pd(_mm256_set1_pd(0.5), z);
  const __m256d w = _mm256_sub_pd(_mm256_set1_pd(1.0), half_z);
  // 1 - z/2 + z^2 p, with the rounding error of 1 - z/2 folded back in.
  const __m256d tail = _mm256_sub_pd(_mm256_sub_pd(_mm256_set1_pd(1.0), w), half_z);
  return _mm256_add_pd(w, _mm256_fmadd_pd(z2, p, tail));
}

inline bool needs_fallback(__m256d x) {
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  const __m256d ax = _mm256_and_pd(x, abs_mask);
  // NaN compares false under _CMP_LE_OQ and is routed to the fallback too.
  const __m256d ok = _mm256_cmp_pd(ax, _mm256_set1_pd(kMaxReducedArgument), _CMP_LE_OQ);
  return _mm256_movemask_pd(ok) != 0xF;
}

inline void sincos4(__m256d x, __m256d& s_out, __m256d& c_out) {
  if (needs_fallback(x)) {
    alignas(32) std::array<double, kLanes> xv{}, sv{}, cv{};
    _mm256_store_pd(xv.data(), x);
    for (std::size_t i = 0; i < kLanes; ++i) {
      sv[i] = std::sin(xv[i]);
      cv[i] = std::cos(xv[i]);
    }
    s_out = _mm256_load_pd(sv.data());
    c_out = _mm256_load_pd(cv.data());
    return;
  }

  const __m256d j = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kTwoOverPi)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(j, _mm256_set1_pd(kPio2Hi), x);
  r = _mm256_fnmadd_pd(j, _mm256_set1_pd(kPio2Mid), r);
  r = _mm256_fnmadd_pd(j, _mm256_set1_pd(kPio2Lo), r);

  const __m256d z = _mm256_mul_pd(r, r);
  const __m256d sr = poly_sin(r, z);
  const __m256d cr = poly_cos(z);

  const __m256i q = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(j));
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i two = _mm256_set1_epi64x(2);
  const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, one), one));
  const __m256d sin_neg =
      _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, two), two));
  const __m256d cos_neg = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(_mm256_and_si256(_mm256_add_epi64(q, one), two), two));

  const __m256d sign_bit = _mm256_set1_pd(-0.0);
  __m256d s = _mm256_blendv_pd(sr, cr, swap);
  __m256d c = _mm256_blendv_pd(cr, sr, swap);
  s = _mm256_xor_pd(s, _mm256_and_pd(sin_neg, sign_bit));
  c = _mm256_xor_pd(c, _mm256_and_pd(cos_neg, sign_bit));
  s_out = s;
  c_out = c;
}

// Runs `body` over full 4-lane blocks, then once more on a zero-padded copy
// of the tail so every element goes through the same vector code.
template <class Body>
void for_each_block(std::size_t n, Body&& body) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) body(i, kLanes);
  if (i < n) body(i, n - i);
}

inline __m256d load_partial(const double* p, std::size_t count, double pad = 0.0) {
  if (count == kLanes) return _mm256_loadu_pd(p);
  alignas(32) std::array<double, kLanes> tmp{pad, pad, pad, pad};
  for (std::size_t k = 0; k < count; ++k) tmp[k] = p[k];
  return _mm256_load_pd(tmp.data());
}

inline void store_partial(double* p, __m256d v, std::size_t count) {
  if (count == kLanes) {
    _mm256_storeu_pd(p, v);
    return;
  }
  alignas(32) std::array<double, kLanes> tmp{};
  _mm256_store_pd(tmp.data(), v);
  for (std::size_t k = 0; k < count; ++k) p[k] = tmp[k];
}

void sincos_avx2(std::span<const double> x, std::span<double> s, std::span<double> c) {
  check_sizes(x.size(), s.size());
  check_sizes(x.size(), c.size());
  for_each_block(x.size(), [&](std::size_t i, std::size_t count) {
    __m256d sv, cv;
    sincos4(load_partial(x.data() + i, count), sv, cv);
    store_partial(s.data() + i, sv, count);
    store_partial(c.data() + i, cv, count);
  });
}

void dispersion_rhs_avx2(const CellPhases& cell, std::span<const double> x,
                         std::span<double> out) {
  check_sizes(x.size(), out.size());
  const __m256d alpha = _mm256_set1_pd(cell.alpha);
  const __m256d beta = _mm256_set1_pd(cell.beta);
  const __m256d mix = _mm256_set1_pd(cell.mix);
  for_each_block(x.size(), [&](std::size_t i, std::size_t count) {
    const __m256d xv = load_partial(x.data() + i, count);
    __m256d sa, ca, sb, cb;
    sincos4(_mm256_mul_pd(alpha, xv), sa, ca);
    sincos4(_mm256_mul_pd(beta, xv), sb, cb);
    const __m256d g = _mm256_fnmadd_pd(_mm256_mul_pd(mix, sa), sb, _mm256_mul_pd(ca, cb));
    store_partial(out.data() + i, g, count);
  });
}

double layer_energy_avx2(const LayerWave& wave, std::span<const double> z,
                         std::span<const double> w) {
  check_sizes(z.size(), w.size());
  // With A = C+ + C-, D = C+ - C-, c = cos Kz, s = sin Kz:
  //   E = A c + i D s,  B = D c + i A s
  //   |E|^2 = |A|^2 c^2 + |D|^2 s^2 + 2 c s Im(A conj D)
  //   |B|^2 = |D|^2 c^2 + |A|^2 s^2 - 2 c s Im(A conj D)
  const std::complex<double> a = wave.plus + wave.minus;
  const std::complex<double> d = wave.plus - wave.minus;
  const double a2 = std::norm(a);
  const double d2 = std::norm(d);
  const double cross = 2.0 * std::imag(a * std::conj(d));

  const __m256d k = _mm256_set1_pd(wave.wavenumber);
  const __m256d cc_coef = _mm256_set1_pd(wave.e_weight * a2 + wave.b_weight * d2);
  const __m256d ss_coef = _mm256_set1_pd(wave.e_weight * d2 + wave.b_weight * a2);
  const __m256d cs_coef = _mm256_set1_pd((wave.e_weight - wave.b_weight) * cross);

  __m256d acc = _mm256_setzero_pd();
  for_each_block(z.size(), [&](std::size_t i, std::size_t count) {
    const __m256d zv = load_partial(z.data() + i, count);
    const __m256d wv = load_partial(w.data() + i, count);  // zero weight on padding
    __m256d s, c;
    sincos4(_mm256_mul_pd(k, zv), s, c);
    __m256d f = _mm256_mul_pd(cc_coef, _mm256_mul_pd(c, c));
    f = _mm256_fmadd_pd(ss_coef, _mm256_mul_pd(s, s), f);
    f = _mm256_fmadd_pd(cs_coef, _mm256_mul_pd(c, s), f);
    acc = _mm256_fmadd_pd(wv, f, acc);
  });
  alignas(32) std::array<double, kLanes> lanes{};
  _mm256_store_pd(lanes.data(), acc);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

}  // namespace

namespace detail {
const Kernels kAvx2Kernels{Isa::avx2, &sincos_avx2, &dispersion_rhs_avx2, &layer_energy_avx2};
}  // namespace detail

}  // namespace kerrphc::simd
