#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "henon/errors.hpp"
#include "henon_cli/commands.hpp"
#include "henon_cli/serialize.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

int fail(const char* kind, const std::string& message, int code) {
  const nlohmann::json body{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
  std::cerr << body.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using henon::cli::RunConfig;
  RunConfig cfg;
  double alpha = 0.0;

  CLI::App app{"Radial nodal solutions of the Henon equation: profiles, spectra, expansions, "
               "Morse indices and bifurcation points."};
  // -h would collide with the grid step flag --h.
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", henon::cli::kProgramVersion);
  app.set_config("--config", "", "Flat key=value file with the same keys as the long flags");
  app.require_subcommand(1, 1);

  app.add_option("--N", cfg.N, "Space dimension (>= 3)")->capture_default_str();
  app.add_option("--p", cfg.p, "Nonlinearity exponent (> 2)")->capture_default_str();
  app.add_option("--K", cfg.K, "Number of nodal regions")->capture_default_str();
  auto* alpha_opt = app.add_option("--alpha", alpha, "Weight exponent (> alpha_p)");
  app.add_option("--alpha-grid", cfg.alpha_grid, "alpha grid lo:hi:step");
  app.add_option("--ell", cfg.ell, "Degree range lo:hi for bifurcations")->capture_default_str();
  app.add_option("--i", cfg.i, "Eigenvalue index for bifurcations")->capture_default_str();
  app.add_option("--window", cfg.window, "alpha search window lo:hi for bifurcations");
  app.add_option("--samples", cfg.samples, "Sampling points on the bifurcation window")
      ->capture_default_str();
  app.add_option("--T", cfg.T, "Half-line truncation")->capture_default_str();
  app.add_option("--h", cfg.h, "Grid step")->capture_default_str();
  app.add_option("--tol", cfg.tol, "Relative ODE tolerance")->capture_default_str();
  app.add_option("--out", cfg.out, "Output directory")->capture_default_str();
  app.add_flag("--oracle", cfg.oracle, "Cross-check shooting against the finite-difference spectrum");
  app.add_flag("--cache", cfg.cache,
               "Persist spectra in HENON_SPECTRA_CACHE or <out>/.henon-cache");
  app.add_flag("--limit", cfg.limit, "Also compute the gamma = 0 limit");
  app.add_flag("--V", cfg.V, "Also compute the gamma-derivative V at the limit");

  for (const char* name : {"solve", "spectrum", "curves", "bifurcations", "morse"}) {
    auto* sub = app.add_subcommand(name)->fallthrough();
    sub->set_help_flag("--help", "Print this help message and exit");
  }
  app.get_subcommand("solve")->description("Radial solution, half-line profile, U_0 and V");
  app.get_subcommand("spectrum")->description("Negative eigenvalues nu_j and mu_j per alpha");
  app.get_subcommand("curves")->description("Two-term large-alpha expansion of mu_j");
  app.get_subcommand("bifurcations")->description("alpha with mu_i(alpha) + lambda_ell = 0");
  app.get_subcommand("morse")->description("Morse index and its negative pairs per alpha");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kExitValidation);
  }

  cfg.command = app.get_subcommands().front()->get_name();
  if (alpha_opt->count() > 0) cfg.alpha = alpha;

  try {
    const auto res = henon::cli::run_command(cfg);
    nlohmann::json summary{{"command", cfg.command}, {"files", nlohmann::json::array()},
                           {"warnings", res.warnings}};
    for (const auto& f : res.files) summary["files"].push_back(f.string());
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << summary.dump(2) << '\n';
    return 0;
  } catch (const henon::ValidationError& e) {
    return fail("validation", e.what(), kExitValidation);
  } catch (const henon::NumericalError& e) {
    return fail("numerical", e.what(), kExitNumerical);
  } catch (const std::filesystem::filesystem_error& e) {
    return fail("io", e.what(), kExitIo);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), kExitNumerical);
  }
}
