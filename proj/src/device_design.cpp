#include "kerrphc/device_design.hpp"

#include <cmath>
#include <sstream>

#include "kerrphc/errors.hpp"

namespace kerrphc {

namespace {

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (Error& e) {
    if (e.stage().empty()) e.set_stage(name);
    throw;
  }
}

}  // namespace

void DesignInput::validate() const {
  crystal.validate();
  pulse.validate();
  constants.validate();
  if (n2.has_value() == chi3.has_value()) {
    throw UsageError("exactly one of n2 and chi3 must be given");
  }
}

double time_of_flight(double chi) {
  if (chi == 0.0 || !std::isfinite(chi)) {
    throw NoNonlinearityError("Kerr coupling is zero: no flight time produces a pi/2 phase");
  }
  return kPi / (2.0 * std::abs(chi));
}

double homogeneous_length(double tau, const Material& material,
                          const PhysicalConstants& constants) {
  if (!(tau > 0.0)) throw DomainError("time of flight must be positive");
  material.validate();
  return constants.c * tau / std::sqrt(material.eps_rel * material.mu_rel);
}

double crystal_length(double tau, double v_g, const EnergyFractions& fractions) {
  if (!(fractions.p_b > 0.0)) {
    throw DomainError("P_B = 0: photons never enter the Kerr layer");
  }
  if (!(v_g > 0.0)) throw DomainError("group velocity must be positive");
  return tau * ((fractions.p_a + fractions.p_b) / fractions.p_b) * v_g;
}

LayerCounts layer_counts(double l_phc, const CrystalSpec& crystal) {
  if (!(l_phc > 0.0)) throw DomainError("crystal length must be positive");
  const double periods = l_phc / crystal.period();
  // Round half up; the slack keeps 10.5 L / L = 10.4999... from rounding down.
  const auto count = static_cast<long>(std::floor(periods + 0.5 + 1e-9));
  return {count, 2 * count};
}

NsGateDesign design_ns_gate(const DesignInput& input) {
  stage("input", [&] { input.validate(); });
  const auto& k = input.constants;
  const Material& kerr = input.crystal.material_b;

  NsGateDesign out;
  out.omega = stage("omega_from_lambda", [&] { return omega_from_lambda(input.pulse.lambda0, k); });
  out.chi3 = stage("chi3_from_n2", [&] {
    return input.chi3 ? *input.chi3 : chi3_from_n2(*input.n2, kerr.refractive_index(), k);
  });
  out.d_in_medium = stage("packet_width_in_medium", [&] {
    return packet_width_in_medium(input.pulse.packet_width_d0, kerr, k);
  });
  out.chi = stage("kerr_coupling", [&] {
    return kerr_coupling(out.chi3, out.omega, kerr, input.pulse.cross_section_S,
                         out.d_in_medium, k);
  });
  out.tau_tof = stage("time_of_flight", [&] { return time_of_flight(out.chi); });
  out.homogeneous_length_l =
      stage("homogeneous_length", [&] { return homogeneous_length(out.tau_tof, kerr, k); });

  const DispersionPoint point = stage("solve_k", [&] {
    const BlochSolution sol = solve_k(out.omega, input.crystal, k);
    if (const auto* gap = std::get_if<BandGap>(&sol)) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "frequency " << out.omega << " rad/s lies in the gap above band "
          << gap->below_band << " (" << gap->omega_low << " .. " << gap->omega_high
          << " rad/s)";
      throw BandGapError(msg.str(), gap->omega_low, gap->omega_high);
    }
    return std::get<DispersionPoint>(sol);
  });
  out.band = point.band;
  out.k = point.k;
  out.v_g = stage("group_velocity", [&] { return group_velocity(point, input.crystal, k); });

  const BoundaryMatrix m =
      stage("boundary_matrix", [&] { return boundary_matrix(point.omega, point.k, input.crystal, k); });
  const FieldCoefficients coeffs = stage("null_vector", [&] { return null_vector(m); });
  const EnergyFractions fractions =
      stage("energy_fractions", [&] { return energy_fractions(coeffs, input.crystal, k); });
  out.p_a = fractions.p_a;
  out.p_b = fractions.p_b;

  out.crystal_length_l_phc =
      stage("crystal_length", [&] { return crystal_length(out.tau_tof, out.v_g, fractions); });
  const LayerCounts counts =
      stage("layer_counts", [&] { return layer_counts(out.crystal_length_l_phc, input.crystal); });
  out.period_count = counts.period_count;
  out.layer_count = counts.layer_count;
  out.smallness_ratio =
      stage("nonlinearity_smallness", [&] { return nonlinearity_smallness(out.chi, out.omega); });
  if (!(std::abs(out.smallness_ratio) < kSmallnessWarningThreshold)) {
    out.warnings.push_back(
        "nonlinearity not small: (8/9) chi/omega >= 1e-2, linear band structure is "
        "questionable");
  }
  return out;
}

nlohmann::ordered_json design_to_json(const NsGateDesign& d) {
  nlohmann::ordered_json j;
  j["omega"] = d.omega;
  j["chi3"] = d.chi3;
  j["d_in_medium"] = d.d_in_medium;
  j["chi"] = d.chi;
  j["tau_tof"] = d.tau_tof;
  j["homogeneous_length_l"] = d.homogeneous_length_l;
  j["band"] = d.band;
  j["k"] = d.k;
  j["v_g"] = d.v_g;
  j["p_a"] = d.p_a;
  j["p_b"] = d.p_b;
  j["crystal_length_l_phc"] = d.crystal_length_l_phc;
  j["period_count"] = d.period_count;
  j["layer_count"] = d.layer_count;
  j["smallness_ratio"] = d.smallness_ratio;
  j["warnings"] = d.warnings;
  return j;
}

}  // namespace kerrphc
