#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "henon/asymptotics.hpp"
#include "henon/errors.hpp"
#include "henon_cli/cache.hpp"
#include "henon_cli/config.hpp"
#include "henon_cli/serialize.hpp"

using namespace henon;
using namespace henon::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

template <class T>
void expect_round_trip(const T& value) {
  const json a = value;
  const T back = a.get<T>();
  const json b = back;
  EXPECT_EQ(a.dump(), b.dump());
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("henon_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args, const fs::path& dir) {
  const std::string cmd = std::string("\"") + HENON_SPECTRA_BIN + "\" " + args + " > \"" +
                          (dir / "stdout.txt").string() + "\" 2> \"" +
                          (dir / "stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Serialize, RoundTripIsExact) {
  const Tolerances tol;
  const auto sol = solve_radial({3, 4.0, 2, 5.0}, tol);
  expect_round_trip(sol);
  const auto U = to_halfline(sol, 20.0, tol, 1e-2);
  expect_round_trip(U);
  const auto U0 = limit_profile(4.0, 2, 20.0, tol, 1e-2);
  expect_round_trip(U0);
  expect_round_trip(solve_V(U0, tol));
  expect_round_trip(tol);

  const SpectrumSettings s{20.0, 1e-2, tol, false};
  auto spec = spectrum_at_alpha({3, 4.0, 2, 5.0}, s);
  spec.oracle_deltas = {1e-7, 2e-7};
  expect_round_trip(spec);
  const SpectrumResult back = json(spec).get<SpectrumResult>();
  ASSERT_EQ(back.pairs.size(), spec.pairs.size());
  for (std::size_t k = 0; k < spec.pairs.size(); ++k) {
    EXPECT_EQ(back.pairs[k].nu, spec.pairs[k].nu);  // bitwise
    EXPECT_EQ(back.mu[k], spec.mu[k]);
  }
  auto limit_spec = limit_spectrum(U0, 2, tol);
  expect_round_trip(limit_spec);
  EXPECT_TRUE(json(limit_spec)["alpha"].is_null());

  expect_round_trip(morse_index({3, 4.0, 2, 5.0}, spec));
  ExpansionReport rep;
  rep.j = 2;
  rep.nu_star = -0.1 / 3.0;
  rep.samples = {{50.0, -1.0 / 7.0, 3.0, 1e-3, 2e-3}};
  expect_round_trip(rep);
  BifurcationPoint b;
  b.i = 1;
  b.ell = 3;
  b.alpha = 0.1 + 0.2;
  b.lambda = 12.0;
  b.resonant_set = {{1, 3, 0.0}, {2, 5, -1e-3}};
  expect_round_trip(b);
}

TEST(Serialize, RejectsInconsistentRecords) {
  json g = GridFunction(0.0, 0.5, {1.0, 2.0}, {0.0, 0.0});
  g["grid_spec"]["n"] = 3;
  EXPECT_THROW(g.get<GridFunction>(), ValidationError);
}

TEST(Serialize, CsvWritesSeventeenDigits) {
  CsvWriter w({"x"});
  w.row({0.1});
  EXPECT_EQ(w.str(), "x\n0.10000000000000001\n");
  EXPECT_THROW(w.row({1.0, 2.0}), std::logic_error);
}

TEST(Config, GridParsing) {
  EXPECT_EQ(parse_grid("1:2:0.5"), (std::vector<double>{1.0, 1.5, 2.0}));
  EXPECT_EQ(parse_grid("50:400:50").size(), 8u);
  EXPECT_TRUE(parse_grid("5:1:1").empty());
  EXPECT_THROW(parse_grid("1:2"), ValidationError);
  EXPECT_THROW(parse_grid("1:2:0"), ValidationError);
  EXPECT_THROW(parse_grid("a:b:c"), ValidationError);
  EXPECT_EQ(parse_int_range("2:8"), (std::pair<int, int>{2, 8}));
  EXPECT_THROW(parse_int_range("8:2"), ValidationError);
}

TEST(Config, Validation) {
  RunConfig c;
  c.command = "spectrum";
  c.alpha = 1.0;
  EXPECT_NO_THROW(c.validate());
  c.N = 2;
  EXPECT_THROW(c.validate(), ValidationError);
  c.N = 3;
  c.p = 10.0;  // alpha_p = 2
  EXPECT_THROW(c.validate(), ValidationError);
  c.p = 4.0;
  c.K = 0;
  EXPECT_THROW(c.validate(), ValidationError);
  c.K = 1;
  c.command = "solve";
  c.alpha.reset();
  EXPECT_THROW(c.validate(), ValidationError);
  c.limit = true;
  EXPECT_NO_THROW(c.validate());
}

TEST(Cache, KeyTracksEverySetting) {
  const Family f{3, 4.0, 2};
  const SpectrumSettings s;
  const auto k = spectrum_key(f, s, 5.0);
  EXPECT_EQ(k, spectrum_key(f, s, 5.0));
  EXPECT_NE(k, spectrum_key(f, s, std::nextafter(5.0, 6.0)));
  EXPECT_NE(k, spectrum_key({3, 4.0, 3}, s, 5.0));
  EXPECT_NE(k, spectrum_key({4, 4.0, 2}, s, 5.0));
  auto s2 = s;
  s2.h = 5e-4;
  EXPECT_NE(k, spectrum_key(f, s2, 5.0));
  s2 = s;
  s2.tol.rel_tol = 1e-9;
  EXPECT_NE(k, spectrum_key(f, s2, 5.0));
  s2 = s;
  s2.T = 30.0;
  EXPECT_NE(k, spectrum_key(f, s2, 5.0));
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Cache, HitEqualsFreshSolve) {
  const auto dir = scratch("cache");
  const Family f{3, 4.0, 2};
  const SpectrumSettings s{20.0, 1e-2, Tolerances{}, false};
  DiskCache disk(dir);
  EXPECT_FALSE(disk.load(f, s, 5.0).has_value());
  const auto fresh = spectrum_at_alpha({3, 4.0, 2, 5.0}, s);
  disk.store(f, s, 5.0, fresh);
  const auto hit = disk.load(f, s, 5.0);
  ASSERT_TRUE(hit.has_value());
  EXPECT_EQ(json(*hit).dump(), json(fresh).dump());
  EXPECT_EQ(disk.hits(), 1);

  // A file holding a different key is ignored.
  const auto path = disk.file_for(spectrum_key(f, s, 5.0));
  auto rec = read_json(path);
  rec["key"] = "something else";
  write_json(path, rec);
  EXPECT_FALSE(disk.load(f, s, 5.0).has_value());

  SpectrumCache mem(f, s);
  disk.attach(mem);
  const auto a = mem.at(6.0);
  SpectrumCache mem2(f, s);
  disk.attach(mem2);
  const auto b = mem2.at(6.0);
  EXPECT_EQ(a->mu, b->mu);
}

TEST(Binary, ExitCodes) {
  const auto dir = scratch("exit");
  const std::string out = " --out \"" + dir.string() + "\"";
  EXPECT_EQ(run("--help", dir), 0);
  EXPECT_EQ(run("--version", dir), 0);
  EXPECT_EQ(run("", dir), 2);
  EXPECT_EQ(run("frobnicate", dir), 2);
  EXPECT_EQ(run("spectrum --alpha 1 --bogus" + out, dir), 2);
  EXPECT_EQ(run("spectrum --p 10 --alpha 1" + out, dir), 2);
  EXPECT_NE(slurp(dir / "stderr.txt").find("alpha_p"), std::string::npos);
  const auto err = json::parse(slurp(dir / "stderr.txt"));
  EXPECT_EQ(err["error"]["kind"], "validation");
  EXPECT_EQ(run("solve" + out, dir), 2);
  EXPECT_EQ(run("solve --K 2 --alpha 5 --T 20 --h 1e-2" + out, dir), 0);
  EXPECT_TRUE(fs::exists(dir / "u_alpha.json"));
  EXPECT_TRUE(fs::exists(dir / "U_gamma.csv"));
  const auto summary = json::parse(slurp(dir / "stdout.txt"));
  EXPECT_EQ(summary["command"], "solve");
}

TEST(Binary, SpectrumIsDeterministicAndOracleAddsColumn) {
  const auto d1 = scratch("det1"), d2 = scratch("det2");
  const std::string args = "spectrum --K 2 --alpha-grid 4:6:1 --T 20 --h 1e-2";
  ASSERT_EQ(run(args + " --out \"" + d1.string() + "\"", d1), 0);
  ASSERT_EQ(run(args + " --out \"" + d2.string() + "\"", d2), 0);
  const auto j1 = read_json(d1 / "spectrum.json"), j2 = read_json(d2 / "spectrum.json");
  EXPECT_EQ(j1["payload"].dump(), j2["payload"].dump());
  EXPECT_EQ(j1["schema_version"], kSchemaVersion);
  EXPECT_EQ(j1["kind"], "SpectrumResult");
  EXPECT_EQ(slurp(d1 / "spectrum.csv"), slurp(d2 / "spectrum.csv"));
  const auto csv = slurp(d1 / "spectrum.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "alpha,gamma,j,nu,mu,zero_count,norm_error");

  ASSERT_EQ(run(args + " --oracle --out \"" + d1.string() + "\"", d1), 0);
  const auto csv2 = slurp(d1 / "spectrum.csv");
  EXPECT_EQ(csv2.substr(0, csv2.find('\n')),
            "alpha,gamma,j,nu,mu,zero_count,norm_error,oracle_rel_gap");
}

TEST(Binary, ConfigFileAndDiskCache) {
  const auto dir = scratch("config");
  {
    std::ofstream cfg(dir / "run.ini");
    cfg << "K=2\nalpha-grid=4:5:1\nT=20\nh=0.01\ncache=true\nout=" << dir.string() << "\n";
  }
  const std::string args = "spectrum --config \"" + (dir / "run.ini").string() + "\"";
  ASSERT_EQ(run(args, dir), 0);
  const auto first = read_json(dir / "spectrum.json")["payload"];
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / ".henon-cache")) ++files;
  EXPECT_EQ(files, 2u);
  ASSERT_EQ(run(args, dir), 0);
  EXPECT_EQ(read_json(dir / "spectrum.json")["payload"].dump(), first.dump());
}
