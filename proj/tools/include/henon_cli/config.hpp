#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "henon/spectrum.hpp"

namespace henon::cli {

/// Everything a subcommand needs. Ranges are kept as the user typed them and
/// parsed on validation so that error messages can echo the input.
struct RunConfig {
  std::string command;
  int N = 3;
  double p = 4.0;
  int K = 1;
  std::optional<double> alpha;
  std::string alpha_grid;  // lo:hi:step
  std::string ell = "2:8";  // lo:hi
  int i = 1;
  std::string window;  // lo:hi, bifurcation search interval in alpha
  int samples = 24;
  double T = 40.0;
  double h = 1e-3;
  double tol = 1e-8;  // relative ODE tolerance; the others are scaled from it
  std::string out = ".";
  bool oracle = false;
  bool cache = false;
  bool limit = false;
  bool V = false;

  Tolerances tolerances() const;
  SpectrumSettings settings() const;
  Family family() const { return {N, p, K}; }

  /// Throws ValidationError. Checks ProblemParams invariants at every alpha
  /// that will be used, and command-specific requirements.
  void validate() const;

  /// Explicit --alpha, else the parsed grid (may be empty).
  std::vector<double> alphas() const;
  bool has_alpha_input() const { return alpha.has_value() || !alpha_grid.empty(); }
  std::pair<int, int> ell_range() const;
  std::optional<std::pair<double, double>> window_range() const;
};

/// lo:hi:step, inclusive of hi up to rounding. hi < lo gives an empty grid.
std::vector<double> parse_grid(const std::string& text);
std::pair<int, int> parse_int_range(const std::string& text);
std::pair<double, double> parse_real_range(const std::string& text);

nlohmann::json to_json(const RunConfig& c);

}  // namespace henon::cli
