#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>

#include "henon/spectrum.hpp"

namespace henon::cli {

std::uint64_t fnv1a64(const std::string& text);

/// Canonical description of every setting that changes a spectral result.
/// Reals are written in hexadecimal floating point, so equal strings mean
/// bit-equal inputs.
std::string spectrum_key(const Family& fam, const SpectrumSettings& s, double alpha);

/// HENON_SPECTRA_CACHE if set, else <out>/.henon-cache.
std::filesystem::path cache_directory(const std::filesystem::path& out);

/// One JSON file per (settings, alpha). The stored key string is compared on
/// load, so a hash collision reads as a miss rather than a wrong answer.
/// Eigenfunctions are not persisted.
class DiskCache {
 public:
  explicit DiskCache(std::filesystem::path dir);

  const std::filesystem::path& directory() const { return dir_; }
  std::filesystem::path file_for(const std::string& key) const;

  std::optional<SpectrumResult> load(const Family& fam, const SpectrumSettings& s, double alpha);
  void store(const Family& fam, const SpectrumSettings& s, double alpha, const SpectrumResult& r);

  /// Route misses of the in-memory cache through this directory. The
  /// DiskCache must outlive the SpectrumCache.
  void attach(SpectrumCache& cache);

  long long hits() const { return hits_; }
  long long misses() const { return misses_; }

 private:
  std::filesystem::path dir_;
  std::mutex write_mutex_;
  std::atomic<long long> hits_{0}, misses_{0};
};

}  // namespace henon::cli
