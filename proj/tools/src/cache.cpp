#include "henon_cli/cache.hpp"

#include <cstdio>
#include <cstdlib>

#include "henon_cli/serialize.hpp"

namespace henon::cli {

namespace {

std::string hex(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string spectrum_key(const Family& fam, const SpectrumSettings& s, double alpha) {
  std::string k = "henon-spectrum/v" + std::to_string(kSchemaVersion);
  k += "|N=" + std::to_string(fam.N);
  k += "|p=" + hex(fam.p);
  k += "|K=" + std::to_string(fam.K);
  k += "|alpha=" + hex(alpha);
  k += "|T=" + hex(s.T);
  k += "|h=" + hex(s.h);
  k += "|abs=" + hex(s.tol.abs_tol);
  k += "|rel=" + hex(s.tol.rel_tol);
  k += "|root=" + hex(s.tol.root_tol);
  k += "|eig=" + hex(s.tol.eig_tol);
  k += std::string("|oracle=") + (s.oracle ? "1" : "0");
  return k;
}

std::filesystem::path cache_directory(const std::filesystem::path& out) {
  if (const char* env = std::getenv("HENON_SPECTRA_CACHE"); env != nullptr && *env != '\0') {
    return env;
  }
  return out / ".henon-cache";
}

DiskCache::DiskCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path DiskCache::file_for(const std::string& key) const {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(key)));
  return dir_ / ("spec-" + std::string(buf) + ".json");
}

std::optional<SpectrumResult> DiskCache::load(const Family& fam, const SpectrumSettings& s,
                                              double alpha) {
  const auto key = spectrum_key(fam, s, alpha);
  const auto path = file_for(key);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) {
    ++misses_;
    return std::nullopt;
  }
  try {
    const auto j = read_json(path);
    if (j.at("key").get<std::string>() != key) {
      ++misses_;
      return std::nullopt;
    }
    auto r = j.at("result").get<SpectrumResult>();
    ++hits_;
    return r;
  } catch (const std::exception&) {
    // Unreadable entries are recomputed and overwritten.
    ++misses_;
    return std::nullopt;
  }
}

void DiskCache::store(const Family& fam, const SpectrumSettings& s, double alpha,
                      const SpectrumResult& r) {
  const auto key = spectrum_key(fam, s, alpha);
  std::lock_guard lock(write_mutex_);
  write_json(file_for(key), nlohmann::json{{"key", key}, {"result", r}});
}

void DiskCache::attach(SpectrumCache& cache) {
  const Family fam = cache.family();
  const SpectrumSettings s = cache.settings();
  cache.set_backing([this, fam, s](double a) { return load(fam, s, a); },
                    [this, fam, s](double a, const SpectrumResult& r) { store(fam, s, a, r); });
}

}  // namespace henon::cli
