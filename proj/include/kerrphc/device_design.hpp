#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kerrphc/band_structure.hpp"
#include "kerrphc/field_profile.hpp"
#include "kerrphc/physics.hpp"

namespace kerrphc {

/// Layer B of the crystal is the Kerr medium. Exactly one of `n2` [m^2/W]
/// and `chi3` [m C/V^3] is set.
struct DesignInput {
  CrystalSpec crystal;
  PulseSpec pulse;
  std::optional<double> n2;
  std::optional<double> chi3;
  PhysicalConstants constants;

  void validate() const;
};

/// Every intermediate of the design chain, SI units.
struct NsGateDesign {
  double omega = 0.0;
  double chi3 = 0.0;
  double d_in_medium = 0.0;
  double chi = 0.0;
  double tau_tof = 0.0;
  double homogeneous_length_l = 0.0;
  int band = 0;
  double k = 0.0;
  double v_g = 0.0;
  double p_a = 0.0;
  double p_b = 0.0;
  double crystal_length_l_phc = 0.0;
  long period_count = 0;
  long layer_count = 0;
  double smallness_ratio = 0.0;
  std::vector<std::string> warnings;
};

inline constexpr double kSmallnessWarningThreshold = 1e-2;

/// pi / (2 |chi|): the flight time giving |chi t| = pi/2.
double time_of_flight(double chi);

/// c tau / sqrt(eps_rel mu_rel).
double homogeneous_length(double tau, const Material& material,
                          const PhysicalConstants& constants = {});

/// tau (P_A + P_B) / P_B v_g.
double crystal_length(double tau, double v_g, const EnergyFractions& fractions);

struct LayerCounts {
  long period_count = 0;
  long layer_count = 0;
};

/// period_count = round-half-up(L_PhC / L), layer_count = 2 period_count.
LayerCounts layer_counts(double l_phc, const CrystalSpec& crystal);

/// Runs the whole chain. Stage failures keep their exception type and carry
/// the stage name in Error::stage(); an in-gap frequency raises BandGapError.
NsGateDesign design_ns_gate(const DesignInput& input);

/// Flat snake_case object with the NsGateDesign fields plus "warnings".
nlohmann::ordered_json design_to_json(const NsGateDesign& design);

}  // namespace kerrphc
