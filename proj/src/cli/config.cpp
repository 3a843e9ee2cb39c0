#include "kerrphc/cli/config.hpp"

#include <fstream>
#include <set>

namespace kerrphc::cli {

namespace {

template <class T>
T require(const std::optional<T>& v, const char* key) {
  if (!v) throw ConfigError(std::string("missing configuration field '") + key + "'");
  return *v;
}

double get_real(const nlohmann::json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("field '" + key + "' must be a number");
  return j.get<double>();
}

int get_int(const nlohmann::json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ConfigError("field '" + key + "' must be an integer");
  return j.get<int>();
}

std::string get_string(const nlohmann::json& j, const std::string& key) {
  if (!j.is_string()) throw ConfigError("field '" + key + "' must be a string");
  return j.get<std::string>();
}

}  // namespace

N2Unit parse_n2_unit(const std::string& text) {
  if (text == "m2_per_W") return N2Unit::m2_per_W;
  if (text == "cm2_per_W") return N2Unit::cm2_per_W;
  throw ConfigError("unknown n2 unit '" + text + "' (expected m2_per_W or cm2_per_W)");
}

N2Value parse_n2(const std::string& text) {
  const auto colon = text.find(':');
  const std::string number = text.substr(0, colon);
  N2Value out;
  try {
    std::size_t used = 0;
    out.value = std::stod(number, &used);
    if (used != number.size()) throw std::invalid_argument(number);
  } catch (const std::exception&) {
    throw ConfigError("field 'n2': cannot parse '" + text + "'");
  }
  if (colon != std::string::npos) out.unit = parse_n2_unit(text.substr(colon + 1));
  return out;
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw ConfigError("field 'format': expected csv or json, got '" + text + "'");
}

RunConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  RunConfig c;
  for (const auto& [key, value] : doc.items()) {
    if (key == "l_a") {
      c.l_a = get_real(value, key);
    } else if (key == "l_b") {
      c.l_b = get_real(value, key);
    } else if (key == "eps_a_rel") {
      c.eps_a_rel = get_real(value, key);
    } else if (key == "eps_b_rel") {
      c.eps_b_rel = get_real(value, key);
    } else if (key == "lambda0") {
      c.lambda0 = get_real(value, key);
    } else if (key == "cross_section") {
      c.cross_section = get_real(value, key);
    } else if (key == "packet_width") {
      c.packet_width = get_real(value, key);
    } else if (key == "n2") {
      if (!value.is_object()) throw ConfigError("field 'n2' must be {\"value\": .., \"unit\": ..}");
      N2Value n2;
      bool have_value = false;
      for (const auto& [sub, sv] : value.items()) {
        if (sub == "value") {
          n2.value = get_real(sv, "n2.value");
          have_value = true;
        } else if (sub == "unit") {
          n2.unit = parse_n2_unit(get_string(sv, "n2.unit"));
        } else {
          throw ConfigError("unknown configuration key 'n2." + sub + "'");
        }
      }
      if (!have_value) throw ConfigError("missing configuration field 'n2.value'");
      c.n2 = n2;
    } else if (key == "chi3_si") {
      c.chi3_si = get_real(value, key);
    } else if (key == "bands") {
      c.bands = get_int(value, key);
    } else if (key == "samples") {
      c.samples = get_int(value, key);
    } else if (key == "band") {
      c.band = get_int(value, key);
    } else if (key == "fock_truncation") {
      c.fock_truncation = get_int(value, key);
    } else if (key == "identity_truncation") {
      c.identity_truncation = get_int(value, key);
    } else if (key == "profile_samples") {
      c.profile_samples = get_int(value, key);
    } else if (key == "chi_t") {
      c.chi_t = get_real(value, key);
    } else if (key == "constants") {
      c.constants = get_string(value, key);
    } else if (key == "format") {
      c.format = parse_format(get_string(value, key));
    } else if (key == "out") {
      c.out = get_string(value, key);
    } else {
      throw ConfigError("unknown configuration key '" + key + "'");
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

CrystalSpec RunConfig::crystal() const {
  CrystalSpec s;
  s.material_a = {"A", require(eps_a_rel, "eps_a_rel"), 1.0, 0.0};
  s.material_b = {"B", require(eps_b_rel, "eps_b_rel"), 1.0, 0.0};
  s.l_a = require(l_a, "l_a");
  s.l_b = require(l_b, "l_b");
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("crystal parameters: ") + e.what());
  }
  return s;
}

PulseSpec RunConfig::pulse() const {
  PulseSpec p;
  p.lambda0 = require(lambda0, "lambda0");
  p.cross_section_S = require(cross_section, "cross_section");
  p.packet_width_d0 = require(packet_width, "packet_width");
  try {
    p.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("pulse parameters: ") + e.what());
  }
  return p;
}

PhysicalConstants RunConfig::physical_constants() const {
  if (constants == "rounded") return PhysicalConstants::rounded();
  if (constants == "codata") return PhysicalConstants::codata();
  throw ConfigError("field 'constants': expected rounded or codata, got '" + constants + "'");
}

DesignInput RunConfig::design_input() const {
  DesignInput in;
  in.crystal = crystal();
  in.pulse = pulse();
  in.constants = physical_constants();
  if (n2 && chi3_si) throw ConfigError("give only one of 'n2' and 'chi3_si'");
  if (n2) {
    in.n2 = n2->si();
  } else if (chi3_si) {
    in.chi3 = *chi3_si;
  } else {
    throw ConfigError("missing configuration field 'n2' (or 'chi3_si')");
  }
  return in;
}

}  // namespace kerrphc::cli
