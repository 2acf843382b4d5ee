#pragma once

// Subcommand bodies. Each writes CSV (or a report) to `out` and throws the
// library's error types; run_command maps those to exit codes.

#include "pcqkd/config.hpp"

#include <iosfwd>
#include <string>

namespace pcqkd {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitIntegrity = 2 };

/// "%.9g" with '.' as decimal separator; -0 prints as 0.
std::string format_number(double v);

void cmd_state(const RunConfig& cfg, std::ostream& out);
void cmd_keyrate(const RunConfig& cfg, std::ostream& out);
void cmd_optimize(const RunConfig& cfg, std::ostream& out);
void cmd_maxdist(const RunConfig& cfg, std::ostream& out);
/// Returns false when any check exceeds its tolerance.
bool cmd_verify(const RunConfig& cfg, std::ostream& out);

/// Runs one subcommand, writing errors to `err`.
int run_command(const std::string& name, const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace pcqkd
