#include "henon_cli/serialize.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "henon/errors.hpp"

using nlohmann::json;

namespace henon {

namespace numerics {

void to_json(json& j, const Tolerances& t) {
  j = json{{"abs_tol", t.abs_tol}, {"rel_tol", t.rel_tol}, {"root_tol", t.root_tol},
           {"eig_tol", t.eig_tol}};
}

void from_json(const json& j, Tolerances& t) {
  j.at("abs_tol").get_to(t.abs_tol);
  j.at("rel_tol").get_to(t.rel_tol);
  j.at("root_tol").get_to(t.root_tol);
  j.at("eig_tol").get_to(t.eig_tol);
}

void to_json(json& j, const GridFunction& g) {
  j = json{{"grid_spec", {{"t0", g.t0()}, {"h", g.step()}, {"n", g.size()}}},
           {"values", g.values()},
           {"derivs", g.derivs()}};
}

void from_json(const json& j, GridFunction& g) {
  const auto& spec = j.at("grid_spec");
  auto values = j.at("values").get<std::vector<double>>();
  auto derivs = j.at("derivs").get<std::vector<double>>();
  if (values.size() != spec.at("n").get<std::size_t>()) {
    throw ValidationError("grid record: value count does not match grid_spec.n");
  }
  g = GridFunction(spec.at("t0").get<double>(), spec.at("h").get<double>(), std::move(values),
                   std::move(derivs));
}

}  // namespace numerics

namespace {

void merge(json& into, const json& from) {
  for (auto it = from.begin(); it != from.end(); ++it) into[it.key()] = it.value();
}

}  // namespace

void to_json(json& j, const ProblemParams& p) {
  j = json{{"N", p.N}, {"p", p.p}, {"K", p.K}, {"alpha", p.alpha}};
}

void from_json(const json& j, ProblemParams& p) {
  j.at("N").get_to(p.N);
  j.at("p").get_to(p.p);
  j.at("K").get_to(p.K);
  j.at("alpha").get_to(p.alpha);
}

void to_json(json& j, const RadialSolution& s) {
  j = json{{"params", s.params},
           {"zeros", s.zeros},
           {"center_value", s.center_value},
           {"residual_sup", s.residual_sup}};
  merge(j, json(s.profile));
}

void from_json(const json& j, RadialSolution& s) {
  j.at("params").get_to(s.params);
  j.at("zeros").get_to(s.zeros);
  j.at("center_value").get_to(s.center_value);
  j.at("residual_sup").get_to(s.residual_sup);
  j.get_to(s.profile);
}

void to_json(json& j, const HalflineProfile& s) {
  j = json{{"params", {{"gamma", s.gamma}, {"p", s.p}, {"K", s.K}}},
           {"zeros", s.zeros},
           {"limit_L", s.limit_L},
           {"truncation_T", s.truncation_T},
           {"residual_sup", s.residual_sup}};
  merge(j, json(s.U));
}

void from_json(const json& j, HalflineProfile& s) {
  const auto& p = j.at("params");
  p.at("gamma").get_to(s.gamma);
  p.at("p").get_to(s.p);
  p.at("K").get_to(s.K);
  j.at("zeros").get_to(s.zeros);
  j.at("limit_L").get_to(s.limit_L);
  j.at("truncation_T").get_to(s.truncation_T);
  j.at("residual_sup").get_to(s.residual_sup);
  j.get_to(s.U);
}

void to_json(json& j, const VProfile& s) {
  j = json{{"truncation_T", s.truncation_T}, {"residual_sup", s.residual_sup}};
  merge(j, json(s.V));
}

void from_json(const json& j, VProfile& s) {
  j.at("truncation_T").get_to(s.truncation_T);
  j.at("residual_sup").get_to(s.residual_sup);
  j.get_to(s.V);
}

void to_json(json& j, const SpectrumResult& s) {
  std::vector<double> nu, norm;
  std::vector<int> zc;
  for (const auto& e : s.pairs) {
    nu.push_back(e.nu);
    zc.push_back(e.zero_count);
    norm.push_back(e.norm_error);
  }
  j = json{{"gamma", s.gamma},
           {"alpha", s.alpha ? json(*s.alpha) : json(nullptr)},
           {"N", s.N},
           {"nu", nu},
           {"mu", s.mu},
           {"zero_counts", zc},
           {"norm_errors", norm},
           {"oracle_deltas", s.oracle_deltas}};
}

void from_json(const json& j, SpectrumResult& s) {
  j.at("gamma").get_to(s.gamma);
  if (j.at("alpha").is_null()) {
    s.alpha.reset();
  } else {
    s.alpha = j.at("alpha").get<double>();
  }
  j.at("N").get_to(s.N);
  const auto nu = j.at("nu").get<std::vector<double>>();
  const auto zc = j.at("zero_counts").get<std::vector<int>>();
  const auto norm = j.at("norm_errors").get<std::vector<double>>();
  if (zc.size() != nu.size() || norm.size() != nu.size()) {
    throw ValidationError("spectrum record: per-eigenvalue arrays differ in length");
  }
  s.pairs.clear();
  for (std::size_t k = 0; k < nu.size(); ++k) {
    EigenPair e;
    e.gamma = s.gamma;
    e.j = static_cast<int>(k) + 1;
    e.nu = nu[k];
    e.zero_count = zc[k];
    e.norm_error = norm[k];
    s.pairs.push_back(std::move(e));
  }
  j.at("mu").get_to(s.mu);
  j.at("oracle_deltas").get_to(s.oracle_deltas);
}

void to_json(json& j, const ExpansionSample& s) {
  j = json{{"alpha", s.alpha},
           {"mu", s.mu},
           {"mu_prime_fd", s.mu_prime_fd},
           {"value_error", s.value_error},
           {"derivative_error", s.derivative_error}};
}

void from_json(const json& j, ExpansionSample& s) {
  j.at("alpha").get_to(s.alpha);
  j.at("mu").get_to(s.mu);
  j.at("mu_prime_fd").get_to(s.mu_prime_fd);
  j.at("value_error").get_to(s.value_error);
  j.at("derivative_error").get_to(s.derivative_error);
}

void to_json(json& j, const ExpansionReport& r) {
  j = json{{"j", r.j},
           {"nu_star", r.nu_star},
           {"h_prime0", r.h_prime0},
           {"c_star", r.c_star},
           {"c_star_grouped", r.c_star_grouped},
           {"samples", r.samples},
           {"strictly_decreasing", r.strictly_decreasing},
           {"errors_decreasing", r.errors_decreasing}};
}

void from_json(const json& j, ExpansionReport& r) {
  j.at("j").get_to(r.j);
  j.at("nu_star").get_to(r.nu_star);
  j.at("h_prime0").get_to(r.h_prime0);
  j.at("c_star").get_to(r.c_star);
  j.at("c_star_grouped").get_to(r.c_star_grouped);
  j.at("samples").get_to(r.samples);
  j.at("strictly_decreasing").get_to(r.strictly_decreasing);
  j.at("errors_decreasing").get_to(r.errors_decreasing);
}

void to_json(json& j, const NegativePair& p) {
  j = json{{"i", p.i}, {"ell", p.ell}, {"value", p.value}};
}

void from_json(const json& j, NegativePair& p) {
  j.at("i").get_to(p.i);
  j.at("ell").get_to(p.ell);
  j.at("value").get_to(p.value);
}

void to_json(json& j, const MorseReport& r) {
  j = json{{"alpha", r.alpha},
           {"m", r.m},
           {"E_minus", r.E_minus},
           {"ell_max_scanned", r.ell_max_scanned},
           {"margin", r.margin},
           {"near_degenerate", r.near_degenerate},
           {"radial_count", r.radial_count}};
}

void from_json(const json& j, MorseReport& r) {
  j.at("alpha").get_to(r.alpha);
  j.at("m").get_to(r.m);
  j.at("E_minus").get_to(r.E_minus);
  j.at("ell_max_scanned").get_to(r.ell_max_scanned);
  j.at("margin").get_to(r.margin);
  j.at("near_degenerate").get_to(r.near_degenerate);
  j.at("radial_count").get_to(r.radial_count);
}

void to_json(json& j, const ResonantPair& p) {
  j = json{{"j", p.j}, {"ell", p.ell}, {"gap", p.gap}};
}

void from_json(const json& j, ResonantPair& p) {
  j.at("j").get_to(p.j);
  j.at("ell").get_to(p.ell);
  j.at("gap").get_to(p.gap);
}

void to_json(json& j, const BifurcationPoint& b) {
  j = json{{"i", b.i},
           {"ell", b.ell},
           {"alpha", b.alpha},
           {"lambda_ell", b.lambda},
           {"residual", b.residual},
           {"seed", b.seed},
           {"morse_below", b.morse_below},
           {"morse_above", b.morse_above},
           {"morse_jump", b.morse_jump},
           {"eps", b.eps},
           {"resonant_set", b.resonant_set},
           {"resonant_dimension", b.resonant_dimension}};
}

void from_json(const json& j, BifurcationPoint& b) {
  j.at("i").get_to(b.i);
  j.at("ell").get_to(b.ell);
  j.at("alpha").get_to(b.alpha);
  j.at("lambda_ell").get_to(b.lambda);
  j.at("residual").get_to(b.residual);
  j.at("seed").get_to(b.seed);
  j.at("morse_below").get_to(b.morse_below);
  j.at("morse_above").get_to(b.morse_above);
  j.at("morse_jump").get_to(b.morse_jump);
  j.at("eps").get_to(b.eps);
  j.at("resonant_set").get_to(b.resonant_set);
  j.at("resonant_dimension").get_to(b.resonant_dimension);
}

}  // namespace henon

namespace henon::cli {

json make_envelope(const std::string& kind, const json& config, const json& payload,
                   const json& provenance) {
  return json{{"schema_version", kSchemaVersion},
              {"kind", kind},
              {"config", config},
              {"created_at", utc_timestamp()},
              {"payload", payload},
              {"provenance", provenance}};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os << text;
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

json read_json(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return json::parse(is);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (k) text_ += ',';
    text_ += header[k];
  }
  text_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_) throw std::logic_error("CsvWriter: row width mismatch");
  char buf[40];
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) text_ += ',';
    std::snprintf(buf, sizeof buf, "%.17g", values[k]);
    text_ += buf;
  }
  text_ += '\n';
}

void write_grid_csv(const std::filesystem::path& path, const GridFunction& g,
                    const std::vector<std::string>& header) {
  CsvWriter w(header);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (header.size() >= 3) {
      w.row({g.node(i), g.values()[i], g.derivs()[i]});
    } else {
      w.row({g.node(i), g.values()[i]});
    }
  }
  w.save(path);
}

}  // namespace henon::cli
