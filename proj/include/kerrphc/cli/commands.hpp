#pragma once

#include <ostream>

#include "kerrphc/cli/config.hpp"

namespace kerrphc::cli {

enum ExitStatus : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitNumerical = 2,
  kExitBandGap = 3,
};

// Each command writes its document to `out` and diagnostics to `err`, and
// throws on failure; run_command maps exceptions to exit statuses.
int cmd_bands(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_groupvel(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_design(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_gate_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_field(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Runs a subcommand by name, sends output to config.out (or `out`), and
/// turns every failure into an exit status with a message on `err`.
int run_command(const std::string& name, const RunConfig& config, std::ostream& out,
                std::ostream& err);

/// Full command line: `<tool> <subcommand> --config <path> [overrides...]`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kerrphc::cli
