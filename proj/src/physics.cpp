#include "kerrphc/physics.hpp"

#include <cmath>

#include "kerrphc/errors.hpp"

namespace kerrphc {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be finite and positive");
  }
}

}  // namespace

PhysicalConstants PhysicalConstants::codata() {
  PhysicalConstants k;
  k.eps0 = 8.8541878128e-12;
  k.c = 299792458.0;
  k.hbar = 1.054571817e-34;
  k.mu0 = 1.0 / (k.eps0 * k.c * k.c);
  return k;
}

void PhysicalConstants::validate() const {
  require_positive(eps0, "eps0");
  require_positive(c, "c");
  require_positive(hbar, "hbar");
  require_positive(mu0, "mu0");
}

double Material::refractive_index() const { return std::sqrt(eps_rel * mu_rel); }

void Material::validate() const {
  require_positive(eps_rel, "eps_rel");
  require_positive(mu_rel, "mu_rel");
  if (!std::isfinite(chi3)) throw DomainError("chi3 must be finite");
}

void PulseSpec::validate() const {
  require_positive(lambda0, "lambda0");
  require_positive(cross_section_S, "cross_section_S");
  require_positive(packet_width_d0, "packet_width_d0");
}

double omega_from_lambda(double lambda0, const PhysicalConstants& constants) {
  require_positive(lambda0, "wavelength");
  return 2.0 * kPi * constants.c / lambda0;
}

double packet_width_in_medium(double d0, const Material& material,
                              const PhysicalConstants& /*constants*/) {
  require_positive(d0, "packet width");
  material.validate();
  return d0 / std::sqrt(material.eps_rel * material.mu_rel);
}

double chi3_from_n2(double n2, double n0, const PhysicalConstants& constants) {
  require_positive(n0, "linear refractive index");
  return n2 * n0 * n0 * constants.eps0 * constants.eps0 * constants.c;
}

double n2_from_chi3(double chi3, double n0, const PhysicalConstants& constants) {
  require_positive(n0, "linear refractive index");
  return chi3 / (n0 * n0 * constants.eps0 * constants.eps0 * constants.c);
}

double chi3_si_to_esu(double chi3_si) { return chi3_si * kChi3EsuPerSi; }

double chi3_esu_to_si(double chi3_esu) { return chi3_esu / kChi3EsuPerSi; }

double kerr_coupling(double chi3, double omega, const Material& material, double S,
                     double d, const PhysicalConstants& constants) {
  require_positive(omega, "angular frequency");
  // Sd is the quantization volume.
  require_positive(S, "cross-section S");
  require_positive(d, "packet width d");
  material.validate();
  const double eps = material.eps_rel * constants.eps0;
  return 9.0 / 8.0 * constants.hbar * omega * omega * chi3 / (eps * eps * S * d);
}

double nonlinearity_smallness(double chi, double omega) {
  require_positive(omega, "angular frequency");
  return 8.0 / 9.0 * chi / omega;
}

}  // namespace kerrphc
