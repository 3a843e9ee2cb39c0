#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "kerrphc/band_structure.hpp"

namespace kerrphc {

using Matrix4c = Eigen::Matrix<std::complex<double>, 4, 4>;
using Vector4c = Eigen::Matrix<std::complex<double>, 4, 1>;

/// Continuity conditions of the Bloch mode, acting on
/// (C_I+, C_I-, C_II+, C_II-):
///   row 1: E_I(0) = E_II(0)
///   row 2: E_I'(0) = E_II'(0)
///   row 3: E_I(l_a) = e^{ikL} E_II(-l_b)
///   row 4: E_I'(l_a) = e^{ikL} E_II'(-l_b)
/// Rows 2 and 4 are divided by max(K_I, K_II).
struct BoundaryMatrix {
  Matrix4c m;
  double omega = 0.0;
  double k = 0.0;

  std::complex<double> determinant() const { return m.determinant(); }
};

BoundaryMatrix boundary_matrix(double omega, double k, const CrystalSpec& crystal,
                               const PhysicalConstants& constants = {});

/// Field amplitudes of the Bloch mode. Region I (layer A) uses
/// C_I+ e^{iK_I z} + C_I- e^{-iK_I z} on [0, l_a]; region II uses
/// C_II+ e^{iK_II z} + C_II- e^{-iK_II z} on [-l_b, 0], i.e. the layer
/// preceding the origin. Unit norm, phase fixed so the first non-negligible
/// entry (normally C_I+) is real and positive.
struct FieldCoefficients {
  std::complex<double> c_i_plus;
  std::complex<double> c_i_minus;
  std::complex<double> c_ii_plus;
  std::complex<double> c_ii_minus;
  double omega = 0.0;
  double k = 0.0;
  double residual = 0.0;  // ||M c|| / ||c||

  Vector4c as_vector() const { return {c_i_plus, c_i_minus, c_ii_plus, c_ii_minus}; }
  FieldCoefficients scaled(std::complex<double> factor) const;
};

inline constexpr double kNullResidualTolerance = 1e-8;
inline constexpr double kDegenerateSingularValue = 1e-6;

FieldCoefficients null_vector(const BoundaryMatrix& m);

struct FieldPhasor {
  std::complex<double> e;
  std::complex<double> b;
};

/// Complex amplitudes (time factor e^{-i omega t} stripped) at z in [0, L].
/// Layer B at z in (l_a, L] is the region II expression Bloch-shifted by one
/// period: e^{ikL} E_II(z - L).
FieldPhasor field_phasor(double z, const FieldCoefficients& coeffs, const CrystalSpec& crystal,
                         const PhysicalConstants& constants = {});

struct FieldSample {
  double e = 0.0;  // V/m, arbitrary scale
  double b = 0.0;  // T, same scale
};

/// Re{phasor e^{-i omega t}}.
FieldSample field_at(double z, double t, const FieldCoefficients& coeffs,
                     const CrystalSpec& crystal, const PhysicalConstants& constants = {});

struct EnergyFractions {
  double p_a = 0.0;
  double p_b = 0.0;
  // Time-averaged layer integrals of (eps_j / eps0 c^2) E^2 + B^2, in the
  // coefficients' arbitrary scale. Only the ratio is physical.
  double energy_a = 0.0;
  double energy_b = 0.0;
  // |P_B(64 nodes) - P_B(128 nodes)| / P_B(128 nodes).
  double quadrature_discrepancy = 0.0;

  double ratio_b_over_a() const { return p_b / p_a; }
};

inline constexpr int kEnergyQuadratureNodes = 64;
inline constexpr double kQuadratureAgreement = 1e-10;

/// Nodes and weights of an n-point Gauss-Legendre rule on [a, b].
/// Supported orders: 16, 32, 64, 128.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(int order, double a, double b);

/// Per-layer energy integrals with a fixed-order rule, no cross-check.
EnergyFractions layer_energies(const FieldCoefficients& coeffs, const CrystalSpec& crystal,
                               const PhysicalConstants& constants, int order,
                               const simd::Kernels& kernels = simd::kernels());

/// Time-averaged energy split between layers A and B. Integrates with 64
/// Gauss-Legendre nodes per layer and cross-checks against 128.
EnergyFractions energy_fractions(const FieldCoefficients& coeffs, const CrystalSpec& crystal,
                                 const PhysicalConstants& constants = {});

}  // namespace kerrphc
