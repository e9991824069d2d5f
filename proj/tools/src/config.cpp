#include "henon_cli/config.hpp"

#include <cmath>
#include <sstream>

#include "henon/errors.hpp"

namespace henon::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double to_real(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(what + ": '" + s + "' is not a finite number");
  }
}

int to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(what + ": '" + s + "' is not an integer");
  }
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ValidationError("alpha-grid: expected lo:hi:step, got '" + text + "'");
  const double lo = to_real(parts[0], "alpha-grid"), hi = to_real(parts[1], "alpha-grid"),
               step = to_real(parts[2], "alpha-grid");
  if (!(step > 0.0)) throw ValidationError("alpha-grid: step must be positive");
  std::vector<double> grid;
  if (hi < lo) return grid;
  const auto n = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
  if (n > 100000) throw ValidationError("alpha-grid: more than 100000 points");
  for (long long k = 0; k <= n; ++k) grid.push_back(lo + static_cast<double>(k) * step);
  return grid;
}

std::pair<int, int> parse_int_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw ValidationError("ell: expected lo:hi, got '" + text + "'");
  const int lo = to_int(parts[0], "ell"), hi = to_int(parts[1], "ell");
  if (hi < lo) throw ValidationError("ell: hi must be >= lo in '" + text + "'");
  if (lo < 0) throw ValidationError("ell: degrees must be nonnegative");
  return {lo, hi};
}

std::pair<double, double> parse_real_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw ValidationError("window: expected lo:hi, got '" + text + "'");
  const double lo = to_real(parts[0], "window"), hi = to_real(parts[1], "window");
  if (!(hi > lo)) throw ValidationError("window: hi must exceed lo in '" + text + "'");
  return {lo, hi};
}

Tolerances RunConfig::tolerances() const {
  Tolerances t;
  t.rel_tol = tol;
  t.abs_tol = 1e-2 * tol;
  t.eig_tol = 1e-1 * tol;
  return t;
}

SpectrumSettings RunConfig::settings() const {
  SpectrumSettings s;
  s.T = T;
  s.h = h;
  s.tol = tolerances();
  s.oracle = oracle;
  return s;
}

std::vector<double> RunConfig::alphas() const {
  if (alpha) return {*alpha};
  if (alpha_grid.empty()) return {};
  return parse_grid(alpha_grid);
}

std::pair<int, int> RunConfig::ell_range() const { return parse_int_range(ell); }

std::optional<std::pair<double, double>> RunConfig::window_range() const {
  if (window.empty()) return std::nullopt;
  return parse_real_range(window);
}

void RunConfig::validate() const {
  tolerances().validate();
  if (!(T >= 5.0) || !std::isfinite(T)) throw ValidationError("T must be a finite number >= 5");
  if (!(h > 0.0) || h > 1e-2) throw ValidationError("h must lie in (0, 1e-2]");
  if (!out.empty() && out.find('\0') != std::string::npos) throw ValidationError("out: bad path");
  if (alpha && !alpha_grid.empty()) throw ValidationError("give either --alpha or --alpha-grid, not both");
  if (samples < 4) throw ValidationError("samples must be >= 4");
  // Family-level checks hold without an alpha as well.
  ProblemParams{N, p, K, alpha_p(N > 0 ? N : 3, p) + 1.0}.validate();
  for (double a : alphas()) ProblemParams{N, p, K, a}.validate();

  if (command == "solve") {
    if (!alpha && !limit && !V) throw ValidationError("solve: need --alpha, --limit or --V");
    if (!alpha_grid.empty()) throw ValidationError("solve: takes a single --alpha");
  } else if (command == "spectrum" || command == "morse") {
    if (!has_alpha_input() && !(command == "spectrum" && limit)) {
      throw ValidationError(command + ": need --alpha or --alpha-grid");
    }
  } else if (command == "bifurcations") {
    if (i < 1 || i > K) throw ValidationError("bifurcations: i must lie in [1, K]");
    ell_range();
    if (auto w = window_range(); w && !(w->first > alpha_p(N, p))) {
      std::ostringstream os;
      os << "window: lower end must exceed alpha_p = " << alpha_p(N, p);
      throw ValidationError(os.str());
    }
  } else if (command == "curves") {
    const auto grid = alphas();
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (grid[k] < 10.0) throw ValidationError("curves: alpha grid values must be >= 10");
    }
  }
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j{{"command", c.command}, {"N", c.N},   {"p", c.p},       {"K", c.K},
                   {"T", c.T},             {"h", c.h},   {"tol", c.tol},   {"oracle", c.oracle},
                   {"cache", c.cache},     {"limit", c.limit}, {"V", c.V}};
  j["alpha"] = c.alpha ? nlohmann::json(*c.alpha) : nlohmann::json(nullptr);
  if (!c.alpha_grid.empty()) j["alpha_grid"] = c.alpha_grid;
  if (c.command == "bifurcations") {
    j["i"] = c.i;
    j["ell"] = c.ell;
    j["samples"] = c.samples;
    if (!c.window.empty()) j["window"] = c.window;
  }
  return j;
}

}  // namespace henon::cli
