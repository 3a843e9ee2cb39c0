#include "kerrphc/cli/commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "kerrphc/band_structure.hpp"
#include "kerrphc/cli/emit.hpp"
#include "kerrphc/device_design.hpp"
#include "kerrphc/field_profile.hpp"
#include "kerrphc/fock.hpp"

namespace kerrphc::cli {

namespace {

constexpr double kGateFidelityFloor = 1.0 - 1e-10;
constexpr double kIdentityResidualCeiling = 1e-10;

OutputFormat table_format(const RunConfig& c) { return c.format.value_or(OutputFormat::csv); }

void require_json(const RunConfig& c, const char* command) {
  if (c.format && *c.format != OutputFormat::json) {
    throw ConfigError(std::string(command) + " emits JSON only");
  }
}

struct Table {
  std::vector<std::string> columns;
  std::vector<nlohmann::ordered_json> rows;  // arrays of numbers
};

void emit_table(const Table& t, OutputFormat format, std::ostream& out,
                const nlohmann::ordered_json& extra = nlohmann::ordered_json::object()) {
  if (format == OutputFormat::json) {
    nlohmann::ordered_json doc;
    doc["columns"] = t.columns;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) doc["rows"].push_back(r);
    for (const auto& [key, value] : extra.items()) doc[key] = value;
    out << dump_json(doc);
    return;
  }
  CsvWriter csv(out, t.columns);
  for (const auto& row : t.rows) {
    for (const auto& v : row) {
      if (v.is_number_integer()) {
        csv.integer(v.get<long>());
      } else {
        csv.real(v.get<double>());
      }
    }
    csv.end_row();
  }
  if (!extra.empty()) out << dump_json_line(extra);
}

DispersionPoint require_propagating(double omega, const CrystalSpec& crystal,
                                    const PhysicalConstants& k) {
  const BlochSolution sol = solve_k(omega, crystal, k);
  if (const auto* gap = std::get_if<BandGap>(&sol)) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "frequency " << omega << " rad/s lies in the gap above band " << gap->below_band;
    BandGapError e(msg.str(), gap->omega_low, gap->omega_high);
    e.set_stage("solve_k");
    throw e;
  }
  return std::get<DispersionPoint>(sol);
}

}  // namespace

int cmd_bands(const RunConfig& config, std::ostream& out, std::ostream& /*err*/) {
  if (config.samples < 2) throw ConfigError("field 'samples' must be >= 2");
  if (config.bands < 1) throw ConfigError("field 'bands' must be >= 1");
  const CrystalSpec crystal = config.crystal();
  const PhysicalConstants k = config.physical_constants();
  const BandTable table = band_scan(crystal, k, config.bands, config.samples);
  Table t{{"k_norm", "omega_norm", "band"}, {}};
  for (const auto& p : table.points) {
    t.rows.push_back({table.k_norm(p), table.omega_norm(p), p.band});
  }
  emit_table(t, table_format(config), out);
  return kExitOk;
}

int cmd_groupvel(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.samples < 2) throw ConfigError("field 'samples' must be >= 2");
  if (config.band < 1) throw ConfigError("field 'band' must be >= 1");
  const CrystalSpec crystal = config.crystal();
  const PhysicalConstants k = config.physical_constants();
  BandEdgeScanner scanner(crystal);
  const double L = crystal.period();
  Table t{{"k_norm", "vg_over_c"}, {}};
  for (int j = 0; j < config.samples; ++j) {
    const double kappa = kPi * j / (config.samples - 1);
    // kL = 0 and kL = pi are the band edges of every band.
    if (j == 0 || j == config.samples - 1) {
      err << "groupvel: skipping band-edge sample k_norm = " << format_real(kappa) << "\n";
      continue;
    }
    const double omega = solve_omega(kappa / L, config.band, crystal, k, scanner);
    const DispersionPoint p{kappa / L, omega, config.band};
    try {
      t.rows.push_back({kappa, group_velocity(p, crystal, k) / k.c});
    } catch (const NumericalError& e) {
      err << "groupvel: skipping k_norm = " << format_real(kappa) << ": " << e.what() << "\n";
    }
  }
  emit_table(t, table_format(config), out);
  return kExitOk;
}

int cmd_design(const RunConfig& config, std::ostream& out, std::ostream& err) {
  require_json(config, "design");
  const NsGateDesign d = design_ns_gate(config.design_input());
  for (const auto& w : d.warnings) err << "design: warning: " << w << "\n";
  out << dump_json(design_to_json(d));
  return kExitOk;
}

int cmd_gate_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  require_json(config, "gate-verify");
  if (config.fock_truncation < 2) {
    throw ConfigError("field 'fock_truncation' must be >= 2 to represent |2>");
  }
  if (config.identity_truncation < 4) {
    throw ConfigError("field 'identity_truncation' must be >= 4");
  }
  const double chi_t = config.chi_t.value_or(kNsPhase);
  const bool ideal = chi_t == kNsPhase;
  const auto reports = verify_csf_truth_table(config.fock_truncation, chi_t);
  const double residual = operator_identity_residual(config.identity_truncation);

  nlohmann::ordered_json doc;
  doc["chi_t"] = chi_t;
  doc["fock_truncation"] = config.fock_truncation;
  doc["reports"] = nlohmann::ordered_json::array();
  bool fidelities_ok = true;
  double worst_deviation = 0.0;
  for (const auto& r : reports) {
    nlohmann::ordered_json item;
    item["label"] = r.label;
    item["fidelity"] = r.fidelity;
    item["max_deviation"] = r.max_deviation;
    nlohmann::ordered_json state;
    const auto dumped = fock_to_json(r.output);
    state["num_modes"] = dumped["num_modes"];
    state["max_total_photons"] = dumped["max_total_photons"];
    for (const auto& [key, value] : dumped.items()) {
      if (key != "num_modes" && key != "max_total_photons") state[key] = value;
    }
    item["output"] = state;
    doc["reports"].push_back(item);
    fidelities_ok = fidelities_ok && r.fidelity >= kGateFidelityFloor;
    worst_deviation = std::max(worst_deviation, r.max_deviation);
  }
  doc["operator_identity"] = {{"levels", config.identity_truncation}, {"residual", residual}};
  const bool passed = fidelities_ok && residual <= kIdentityResidualCeiling;
  doc["passed"] = passed;

  nlohmann::ordered_json warnings = nlohmann::ordered_json::array();
  if (!ideal) {
    std::ostringstream w;
    w << "chi_t = " << format_real(chi_t) << " differs from pi/2; max amplitude deviation "
      << format_real(worst_deviation);
    warnings.push_back(w.str());
  }
  doc["warnings"] = warnings;
  for (const auto& w : warnings) err << "gate-verify: warning: " << w.get<std::string>() << "\n";
  out << dump_json(doc);
  // A deliberately detuned phase is a study, not a failure.
  if (!ideal) return kExitOk;
  return passed ? kExitOk : kExitNumerical;
}

int cmd_field(const RunConfig& config, std::ostream& out, std::ostream& /*err*/) {
  if (config.profile_samples < 2) throw ConfigError("field 'profile_samples' must be >= 2");
  const CrystalSpec crystal = config.crystal();
  const PhysicalConstants k = config.physical_constants();
  if (!config.lambda0) throw ConfigError("missing configuration field 'lambda0'");
  const double omega = omega_from_lambda(*config.lambda0, k);
  const DispersionPoint p = require_propagating(omega, crystal, k);
  const FieldCoefficients coeffs = null_vector(boundary_matrix(p.omega, p.k, crystal, k));
  const EnergyFractions fr = energy_fractions(coeffs, crystal, k);

  const double L = crystal.period();
  Table t{{"z_over_L", "E_re", "E_im", "B_re", "B_im"}, {}};
  for (int j = 0; j < config.profile_samples; ++j) {
    const double s = static_cast<double>(j) / (config.profile_samples - 1);
    const FieldPhasor f = field_phasor(s * L, coeffs, crystal, k);
    t.rows.push_back({s, f.e.real(), f.e.imag(), f.b.real(), f.b.imag()});
  }
  nlohmann::ordered_json footer;
  footer["p_a"] = fr.p_a;
  footer["p_b"] = fr.p_b;
  emit_table(t, table_format(config), out, footer);
  return kExitOk;
}

int run_command(const std::string& name, const RunConfig& config, std::ostream& out,
                std::ostream& err) {
  static const std::map<std::string, std::function<int(const RunConfig&, std::ostream&,
                                                       std::ostream&)>>
      commands{{"bands", cmd_bands},
               {"groupvel", cmd_groupvel},
               {"design", cmd_design},
               {"gate-verify", cmd_gate_verify},
               {"field", cmd_field}};
  const auto it = commands.find(name);
  if (it == commands.end()) {
    err << "unknown command '" << name << "'\n";
    return kExitConfig;
  }

  std::ostringstream buffer;
  int status = kExitOk;
  try {
    status = it->second(config, buffer, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const BandGapError& e) {
    err << "band gap: " << e.what() << "\n"
        << "gap edges [rad/s]: " << format_real(e.omega_low()) << " "
        << format_real(e.omega_high()) << "\n";
    return kExitBandGap;
  } catch (const Error& e) {
    err << "numerical error";
    if (!e.stage().empty()) err << " in stage " << e.stage();
    err << ": " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }

  if (config.out) {
    std::ofstream file(*config.out, std::ios::binary);
    if (!file) {
      err << "config error: cannot open output file '" << *config.out << "'\n";
      return kExitConfig;
    }
    file << buffer.str();
  } else {
    out << buffer.str();
  }
  return status;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kerr photonic-crystal NS gate designer"};
  app.require_subcommand(1);

  std::string config_path;
  std::string format;
  std::string out_path;
  std::map<std::string, double> real_overrides;
  std::map<std::string, int> int_overrides;
  std::string n2_text;
  std::string constants;

  const std::vector<std::pair<std::string, std::string>> reals{
      {"l_a", "thickness of layer A [m]"},
      {"l_b", "thickness of layer B [m]"},
      {"eps_a_rel", "relative permittivity of layer A"},
      {"eps_b_rel", "relative permittivity of layer B (Kerr layer)"},
      {"lambda0", "vacuum wavelength [m]"},
      {"cross_section", "packet cross-section S [m^2]"},
      {"packet_width", "vacuum packet width d0 [m]"},
      {"chi3_si", "third-order susceptibility [m C/V^3]"},
      {"chi_t", "Kerr phase chi*t used by gate-verify"}};
  const std::vector<std::pair<std::string, std::string>> ints{
      {"bands", "number of bands"},
      {"samples", "k samples per band"},
      {"band", "band index for groupvel"},
      {"fock_truncation", "maximum total photon number"},
      {"identity_truncation", "Fock levels for the operator identity check"},
      {"profile_samples", "z samples for field"}};

  const auto flag_name = [](std::string key) {
    for (auto& ch : key) {
      if (ch == '_') ch = '-';
    }
    return "--" + key;
  };

  for (const char* name : {"bands", "groupvel", "design", "gate-verify", "field"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON configuration file");
    sub->add_option("--out", out_path, "output path (default: stdout)");
    sub->add_option("--format", format, "csv or json");
    sub->add_option("--n2", n2_text, "n2 as <value>[:m2_per_W|cm2_per_W]");
    sub->add_option("--constants", constants, "rounded or codata");
    for (const auto& [key, help] : reals) {
      sub->add_option_function<double>(
          flag_name(key), [&real_overrides, key = key](double v) { real_overrides[key] = v; },
          help);
    }
    for (const auto& [key, help] : ints) {
      sub->add_option_function<int>(
          flag_name(key), [&int_overrides, key = key](int v) { int_overrides[key] = v; }, help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  RunConfig config;
  try {
    if (!config_path.empty()) config = load_config(config_path);
    for (const auto& [key, v] : real_overrides) {
      if (key == "l_a") config.l_a = v;
      else if (key == "l_b") config.l_b = v;
      else if (key == "eps_a_rel") config.eps_a_rel = v;
      else if (key == "eps_b_rel") config.eps_b_rel = v;
      else if (key == "lambda0") config.lambda0 = v;
      else if (key == "cross_section") config.cross_section = v;
      else if (key == "packet_width") config.packet_width = v;
      else if (key == "chi3_si") {
        config.chi3_si = v;
        config.n2.reset();
      } else if (key == "chi_t") config.chi_t = v;
    }
    for (const auto& [key, v] : int_overrides) {
      if (key == "bands") config.bands = v;
      else if (key == "samples") config.samples = v;
      else if (key == "band") config.band = v;
      else if (key == "fock_truncation") config.fock_truncation = v;
      else if (key == "identity_truncation") config.identity_truncation = v;
      else if (key == "profile_samples") config.profile_samples = v;
    }
    if (!n2_text.empty()) {
      config.n2 = parse_n2(n2_text);
      config.chi3_si.reset();
    }
    if (!constants.empty()) config.constants = constants;
    if (!format.empty()) config.format = parse_format(format);
    if (!out_path.empty()) config.out = out_path;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return run_command(command, config, out, err);
}

}  // namespace kerrphc::cli
