#pragma once

// Photonic bands of a two-layer (Kronig-Penney) stack at normal incidence.
//
// Internally everything runs in normalized variables
//   x     = omega L / (2 pi c)     (normalized frequency)
//   kappa = k L                    (reduced Bloch phase, in [0, pi])
// with L = l_a + l_b. SI values appear only at the API boundary.

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "kerrphc/physics.hpp"
#include "kerrphc/simd/kernels.hpp"

namespace kerrphc {

/// Unit cell: layer A on [0, l_a], layer B on [l_a, l_a + l_b].
/// Both layers are treated as non-magnetic (mu_rel must be 1).
struct CrystalSpec {
  Material material_a;
  Material material_b;
  double l_a = 0.0;
  double l_b = 0.0;

  double period() const { return l_a + l_b; }
  void validate() const;

  // alpha = 2 pi n_a l_a / L, beta = 2 pi n_b l_b / L,
  // mix = (n_a^2 + n_b^2) / (2 n_a n_b).
  simd::CellPhases cell_phases() const;
};

struct DispersionPoint {
  double k = 0.0;      // Bloch wave vector [1/m], in [0, pi/L]
  double omega = 0.0;  // [rad/s]
  int band = 0;        // 1-based, increasing omega at fixed k
};

/// Frequency lies in the gap above band `below_band`.
struct BandGap {
  int below_band = 0;
  double omega_low = 0.0;
  double omega_high = 0.0;
};

using BlochSolution = std::variant<DispersionPoint, BandGap>;

struct BandTable {
  std::vector<DispersionPoint> points;  // band-major, k ascending within a band
  int bands = 0;
  int samples = 0;
  double period = 0.0;
  double c = 0.0;

  double k_norm(const DispersionPoint& p) const { return p.k * period; }
  double omega_norm(const DispersionPoint& p) const;
};

double omega_to_norm(double omega, const CrystalSpec& crystal,
                     const PhysicalConstants& constants = {});
double norm_to_omega(double x, const CrystalSpec& crystal,
                     const PhysicalConstants& constants = {});

/// (K_I, K_II) = (omega / c) (sqrt(eps_a), sqrt(eps_b)).
std::pair<double, double> layer_wavevectors(double omega, const CrystalSpec& crystal,
                                            const PhysicalConstants& constants = {});

/// G(omega) = cos(l_a K_I) cos(l_b K_II)
///          - (K_I^2 + K_II^2)/(2 K_I K_II) sin(l_a K_I) sin(l_b K_II).
/// Propagating iff |G| <= 1, in which case cos(kL) = G.
double dispersion_rhs(double omega, const CrystalSpec& crystal,
                      const PhysicalConstants& constants = {});

double dispersion_rhs_norm(double x, const CrystalSpec& crystal);
/// dG/dx in normalized frequency.
double dispersion_rhs_slope_norm(double x, const CrystalSpec& crystal);

/// cos(kL) - G(omega); zero on the band structure.
double dispersion_residual(const DispersionPoint& point, const CrystalSpec& crystal,
                           const PhysicalConstants& constants = {});

/// Band edges in normalized frequency, discovered lazily by a uniform scan of
/// G with bracketing refinement. Band m occupies [edge(2m-2), edge(2m-1)];
/// the gap above it is (edge(2m-1), edge(2m)). Zero-width gaps (tangential
/// touches of |G| = 1, e.g. a homogeneous stack) produce two equal edges.
class BandEdgeScanner {
 public:
  static constexpr int kPointsPerBandSpan = 256;

  explicit BandEdgeScanner(const CrystalSpec& crystal,
                           const simd::Kernels& kernels = simd::kernels());

  std::pair<double, double> band(int band);

  struct Location {
    int band = 0;        // > 0 when inside a band
    int gap_below = 0;   // > 0 when inside the gap above this band
  };
  Location locate(double x);

  double step() const { return step_; }

 private:
  void ensure_edges(std::size_t count);
  void ensure_scanned_past(double x);
  void extend_grid();
  void process_point(std::size_t i);
  double x_at(std::size_t i) const { return static_cast<double>(i) * step_; }

  CrystalSpec crystal_;
  simd::CellPhases phases_;
  const simd::Kernels* kernels_;
  double step_;
  double min_index_;
  std::vector<double> g_;       // G on the scan grid
  std::size_t processed_ = 0;   // grid points consumed by process_point
  std::vector<double> edges_;
};

BlochSolution solve_k(double omega, const CrystalSpec& crystal,
                      const PhysicalConstants& constants = {});

double solve_omega(double k, int band, const CrystalSpec& crystal,
                   const PhysicalConstants& constants = {});

/// Same as above but reusing a scanner (band_scan uses this).
double solve_omega(double k, int band, const CrystalSpec& crystal,
                   const PhysicalConstants& constants, BandEdgeScanner& scanner);

/// (omega_low, omega_high) of a band in rad/s.
std::pair<double, double> band_edges(int band, const CrystalSpec& crystal,
                                     const PhysicalConstants& constants = {});

/// |d omega / d k| by implicit differentiation of cos(kL) = G(omega).
/// Even bands run downward in the reduced zone; the magnitude is returned.
double group_velocity(const DispersionPoint& point, const CrystalSpec& crystal,
                      const PhysicalConstants& constants = {});

/// `samples` evenly spaced k in [0, pi/L] for each of bands 1..bands.
BandTable band_scan(const CrystalSpec& crystal, const PhysicalConstants& constants,
                    int bands, int samples);

}  // namespace kerrphc
