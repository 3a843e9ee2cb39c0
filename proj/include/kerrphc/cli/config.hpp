#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "kerrphc/device_design.hpp"
#include "kerrphc/errors.hpp"

namespace kerrphc::cli {

/// Bad or missing configuration. Maps to exit status 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class N2Unit { m2_per_W, cm2_per_W };

struct N2Value {
  double value = 0.0;
  N2Unit unit = N2Unit::m2_per_W;

  double si() const { return unit == N2Unit::cm2_per_W ? value * kCm2PerWToM2PerW : value; }
};

enum class OutputFormat { csv, json };

/// Everything a subcommand can read. Physical fields are optional so that a
/// missing one is reported by name only when a command needs it.
struct RunConfig {
  std::optional<double> l_a;
  std::optional<double> l_b;
  std::optional<double> eps_a_rel;
  std::optional<double> eps_b_rel;
  std::optional<double> lambda0;
  std::optional<double> cross_section;
  std::optional<double> packet_width;
  std::optional<N2Value> n2;
  std::optional<double> chi3_si;

  int bands = 4;
  int samples = 200;
  int band = 4;
  int fock_truncation = 4;
  int identity_truncation = 10;
  int profile_samples = 201;
  std::optional<double> chi_t;
  std::string constants = "rounded";

  std::optional<OutputFormat> format;
  std::optional<std::string> out;

  CrystalSpec crystal() const;
  PulseSpec pulse() const;
  PhysicalConstants physical_constants() const;
  DesignInput design_input() const;
};

/// Parses a configuration document. Unknown keys raise ConfigError naming
/// the key.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

/// "1.2e-4", "1.2e-4:cm2_per_W", "1.2e-4:m2_per_W".
N2Value parse_n2(const std::string& text);
N2Unit parse_n2_unit(const std::string& text);
OutputFormat parse_format(const std::string& text);

}  // namespace kerrphc::cli
