#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "henon/morse.hpp"

namespace henon {

namespace numerics {
void to_json(nlohmann::json& j, const Tolerances& t);
void from_json(const nlohmann::json& j, Tolerances& t);
void to_json(nlohmann::json& j, const GridFunction& g);
void from_json(const nlohmann::json& j, GridFunction& g);
}  // namespace numerics

void to_json(nlohmann::json& j, const ProblemParams& p);
void from_json(const nlohmann::json& j, ProblemParams& p);
void to_json(nlohmann::json& j, const RadialSolution& s);
void from_json(const nlohmann::json& j, RadialSolution& s);
void to_json(nlohmann::json& j, const HalflineProfile& s);
void from_json(const nlohmann::json& j, HalflineProfile& s);
void to_json(nlohmann::json& j, const VProfile& s);
void from_json(const nlohmann::json& j, VProfile& s);

/// Eigenvalue data only; eigenfunctions are not serialized.
void to_json(nlohmann::json& j, const SpectrumResult& s);
void from_json(const nlohmann::json& j, SpectrumResult& s);

void to_json(nlohmann::json& j, const ExpansionSample& s);
void from_json(const nlohmann::json& j, ExpansionSample& s);
void to_json(nlohmann::json& j, const ExpansionReport& r);
void from_json(const nlohmann::json& j, ExpansionReport& r);

void to_json(nlohmann::json& j, const NegativePair& p);
void from_json(const nlohmann::json& j, NegativePair& p);
void to_json(nlohmann::json& j, const MorseReport& r);
void from_json(const nlohmann::json& j, MorseReport& r);

void to_json(nlohmann::json& j, const ResonantPair& p);
void from_json(const nlohmann::json& j, ResonantPair& p);
void to_json(nlohmann::json& j, const BifurcationPoint& b);
void from_json(const nlohmann::json& j, BifurcationPoint& b);

}  // namespace henon

namespace henon::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kProgramVersion = "0.1.0";

/// {schema_version, kind, config, created_at, payload, provenance}
nlohmann::json make_envelope(const std::string& kind, const nlohmann::json& config,
                             const nlohmann::json& payload, const nlohmann::json& provenance);

/// UTC timestamp, ISO 8601 with seconds.
std::string utc_timestamp();

/// Write text to path through a temporary file and rename.
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

/// Headered CSV; numbers are written with 17 significant digits.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<double>& values);
  std::string str() const { return text_; }
  void save(const std::filesystem::path& path) const { write_text(path, text_); }

 private:
  std::size_t width_;
  std::string text_;
};

/// Two- or three-column CSV of a gridded function.
void write_grid_csv(const std::filesystem::path& path, const GridFunction& g,
                    const std::vector<std::string>& header);

}  // namespace henon::cli
