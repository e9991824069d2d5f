#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "henon_cli/config.hpp"

namespace henon::cli {

struct CommandResult {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
};

/// u_alpha and U_gamma for --alpha; U0 for --limit; V (and U0) for --V.
CommandResult cmd_solve(const RunConfig& cfg);
/// Negative spectrum at every alpha; --limit adds the gamma = 0 spectrum.
CommandResult cmd_spectrum(const RunConfig& cfg);
/// Two-term expansion check of mu_j(alpha) on the alpha grid (default 50:400:50).
CommandResult cmd_curves(const RunConfig& cfg);
/// Roots of mu_i(alpha) + lambda_ell for ell in --ell inside --window.
CommandResult cmd_bifurcations(const RunConfig& cfg);
/// Morse index and the negative pairs at every alpha.
CommandResult cmd_morse(const RunConfig& cfg);

/// Dispatch on cfg.command after validation.
CommandResult run_command(const RunConfig& cfg);

}  // namespace henon::cli
