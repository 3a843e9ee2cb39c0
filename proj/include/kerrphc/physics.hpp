#pragma once

#include <string>

namespace kerrphc {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Universal constants in SI units.
///
/// The default instance carries the rounded values used in the original
/// GaAs/GaAlAs design estimate (eps0 = 8.85e-12, c = 3.00e8, hbar = 1.05e-34)
/// so that the worked design numbers reproduce digit for digit.
/// `codata()` is available for anyone who wants physical accuracy instead.
struct PhysicalConstants {
  double eps0 = 8.85e-12;   // F/m
  double c = 3.00e8;        // m/s
  double hbar = 1.05e-34;   // J s
  double mu0 = 1.0 / (8.85e-12 * 3.00e8 * 3.00e8);  // H/m, tied to eps0 and c

  static PhysicalConstants rounded() { return {}; }
  static PhysicalConstants codata();

  // Throws DomainError unless every constant is finite and positive.
  void validate() const;
};

/// Linear dielectric with an optional scalar Kerr susceptibility.
struct Material {
  std::string name;
  double eps_rel = 1.0;
  double mu_rel = 1.0;
  double chi3 = 0.0;  // m C / V^3

  double refractive_index() const;
  void validate() const;
};

/// Incident wave packet.
struct PulseSpec {
  double lambda0 = 0.0;          // vacuum wavelength [m]
  double cross_section_S = 0.0;  // [m^2]
  double packet_width_d0 = 0.0;  // vacuum packet width [m]

  void validate() const;
};

double omega_from_lambda(double lambda0, const PhysicalConstants& constants = {});

/// Packet width inside a medium: d0 / sqrt(eps_rel mu_rel).
double packet_width_in_medium(double d0, const Material& material,
                              const PhysicalConstants& constants = {});

/// chi3 [m C/V^3] from the nonlinear refraction coefficient n2 [m^2/W]:
/// chi3 = n2 n0^2 eps0^2 c.
double chi3_from_n2(double n2, double n0, const PhysicalConstants& constants = {});

/// Inverse of `chi3_from_n2`.
double n2_from_chi3(double chi3, double n0, const PhysicalConstants& constants = {});

inline constexpr double kChi3EsuPerSi = 8.1e18;

double chi3_si_to_esu(double chi3_si);
double chi3_esu_to_si(double chi3_esu);

inline constexpr double kCm2PerWToM2PerW = 1.0e-4;

/// Photon-photon interaction rate of a homogeneous Kerr medium,
/// (9/8) hbar omega^2 chi3 / (eps^2 S d) with eps = eps_rel eps0.
double kerr_coupling(double chi3, double omega, const Material& material, double S,
                     double d, const PhysicalConstants& constants = {});

/// (8/9) chi / omega. Small values justify dropping chi3 from the band
/// structure calculation.
double nonlinearity_smallness(double chi, double omega);

}  // namespace kerrphc
