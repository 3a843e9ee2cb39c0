#include "kerrphc/field_profile.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <sstream>

#include "kerrphc/errors.hpp"

namespace kerrphc {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};

template <int N>
QuadratureRule expand_rule(double a, double b) {
  using rule = boost::math::quadrature::gauss<double, N>;
  const auto& x = rule::abscissa();
  const auto& w = rule::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  QuadratureRule out;
  out.nodes.reserve(N);
  out.weights.reserve(N);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      out.nodes.push_back(mid);
      out.weights.push_back(half * w[i]);
      continue;
    }
    out.nodes.push_back(mid - half * x[i]);
    out.weights.push_back(half * w[i]);
    out.nodes.push_back(mid + half * x[i]);
    out.weights.push_back(half * w[i]);
  }
  return out;
}

}  // namespace

BoundaryMatrix boundary_matrix(double omega, double k, const CrystalSpec& crystal,
                               const PhysicalConstants& constants) {
  if (!(omega > 0.0)) throw DomainError("angular frequency must be positive");
  crystal.validate();
  const auto [k1, k2] = layer_wavevectors(omega, crystal, constants);
  const double scale = std::max(k1, k2);
  const double a = k1 / scale;
  const double b = k2 / scale;
  const cplx P = std::polar(1.0, k1 * crystal.l_a);
  const cplx Q = std::polar(1.0, k * crystal.period());
  const cplx R = std::polar(1.0, k2 * crystal.l_b);

  BoundaryMatrix out;
  out.omega = omega;
  out.k = k;
  // clang-format off
  out.m << 1.0,   1.0,         -1.0,       -1.0,
           a,     -a,          -b,         b,
           P,     1.0 / P,     -Q / R,     -Q * R,
           a * P, -a / P,      -b * Q / R, b * Q * R;
  // clang-format on
  return out;
}

FieldCoefficients FieldCoefficients::scaled(std::complex<double> factor) const {
  FieldCoefficients out = *this;
  out.c_i_plus *= factor;
  out.c_i_minus *= factor;
  out.c_ii_plus *= factor;
  out.c_ii_minus *= factor;
  return out;
}

FieldCoefficients null_vector(const BoundaryMatrix& bm) {
  Eigen::JacobiSVD<Matrix4c> svd(bm.m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();  // descending
  Vector4c v = svd.matrixV().col(3);

  if (sigma(2) < kDegenerateSingularValue) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "degenerate null space (sigma_3 = " << sigma(2) << ", sigma_4 = " << sigma(3)
        << "); candidate directions:";
    for (int col = 2; col < 4; ++col) {
      msg << " [";
      for (int r = 0; r < 4; ++r) msg << (r ? ", " : "") << svd.matrixV()(r, col);
      msg << "]";
    }
    throw NumericalError(msg.str());
  }

  v.normalize();
  for (int r = 0; r < 4; ++r) {
    if (std::abs(v(r)) > 1e-12) {
      v *= std::conj(v(r)) / std::abs(v(r));
      v(r) = std::abs(v(r));
      break;
    }
  }

  FieldCoefficients c;
  c.c_i_plus = v(0);
  c.c_i_minus = v(1);
  c.c_ii_plus = v(2);
  c.c_ii_minus = v(3);
  c.omega = bm.omega;
  c.k = bm.k;
  c.residual = (bm.m * v).norm() / v.norm();
  if (c.residual > kNullResidualTolerance) {
    std::ostringstream msg;
    msg << "boundary matrix has no null vector: residual " << c.residual
        << " (is (omega, k) on the band structure?)";
    throw NumericalError(msg.str());
  }
  return c;
}

FieldPhasor field_phasor(double z, const FieldCoefficients& coeffs, const CrystalSpec& crystal,
                         const PhysicalConstants& constants) {
  const auto [k1, k2] = layer_wavevectors(coeffs.omega, crystal, constants);
  const double omega = coeffs.omega;
  const auto wave = [&](cplx plus, cplx minus, double K, double at) {
    const cplx fwd = std::polar(1.0, K * at);
    return FieldPhasor{plus * fwd + minus * std::conj(fwd),
                       K / omega * (plus * fwd - minus * std::conj(fwd))};
  };
  if (z <= crystal.l_a) return wave(coeffs.c_i_plus, coeffs.c_i_minus, k1, z);
  const cplx bloch = std::polar(1.0, coeffs.k * crystal.period());
  FieldPhasor p = wave(coeffs.c_ii_plus, coeffs.c_ii_minus, k2, z - crystal.period());
  p.e *= bloch;
  p.b *= bloch;
  return p;
}

FieldSample field_at(double z, double t, const FieldCoefficients& coeffs,
                     const CrystalSpec& crystal, const PhysicalConstants& constants) {
  const FieldPhasor p = field_phasor(z, coeffs, crystal, constants);
  const cplx phase = std::polar(1.0, -coeffs.omega * t);
  return {std::real(p.e * phase), std::real(p.b * phase)};
}

QuadratureRule gauss_legendre(int order, double a, double b) {
  switch (order) {
    case 16:
      return expand_rule<16>(a, b);
    case 32:
      return expand_rule<32>(a, b);
    case 64:
      return expand_rule<64>(a, b);
    case 128:
      return expand_rule<128>(a, b);
    default:
      throw UsageError("unsupported Gauss-Legendre order " + std::to_string(order));
  }
}

EnergyFractions layer_energies(const FieldCoefficients& coeffs, const CrystalSpec& crystal,
                               const PhysicalConstants& constants, int order,
                               const simd::Kernels& kernels) {
  const auto [k1, k2] = layer_wavevectors(coeffs.omega, crystal, constants);
  const double c2 = constants.c * constants.c;
  // Time average of Re(u e^{-i w t})^2 is |u|^2 / 2. B = (K/omega) (...) and
  // (K/omega)^2 = eps_rel / c^2, so both terms carry eps_rel / c^2.
  const auto integrate = [&](cplx plus, cplx minus, double K, double eps_rel, double z0,
                             double z1) {
    const QuadratureRule rule = gauss_legendre(order, z0, z1);
    const simd::LayerWave wave{plus, minus, K, 0.5 * eps_rel / c2, 0.5 * eps_rel / c2};
    return kernels.layer_energy(wave, rule.nodes, rule.weights);
  };

  EnergyFractions out;
  out.energy_a = integrate(coeffs.c_i_plus, coeffs.c_i_minus, k1, crystal.material_a.eps_rel,
                           0.0, crystal.l_a);
  // Region II coefficients describe the layer on [-l_b, 0]; the layer on
  // [l_a, L] differs only by the unimodular Bloch factor.
  out.energy_b = integrate(coeffs.c_ii_plus, coeffs.c_ii_minus, k2, crystal.material_b.eps_rel,
                           -crystal.l_b, 0.0);
  const double total = out.energy_a + out.energy_b;
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw DomainError("energy_fractions: zero total field energy");
  }
  out.p_a = out.energy_a / total;
  out.p_b = out.energy_b / total;
  return out;
}

EnergyFractions energy_fractions(const FieldCoefficients& coeffs, const CrystalSpec& crystal,
                                 const PhysicalConstants& constants) {
  crystal.validate();
  EnergyFractions out =
      layer_energies(coeffs, crystal, constants, kEnergyQuadratureNodes);
  const EnergyFractions fine = layer_energies(coeffs, crystal, constants, 128);
  out.quadrature_discrepancy = std::abs(out.p_b - fine.p_b) / fine.p_b;
  if (out.quadrature_discrepancy > kQuadratureAgreement) {
    std::ostringstream msg;
    msg << "energy quadrature not converged: 64 vs 128 nodes differ by "
        << out.quadrature_discrepancy;
    throw NumericalError(msg.str());
  }
  return out;
}

}  // namespace kerrphc
