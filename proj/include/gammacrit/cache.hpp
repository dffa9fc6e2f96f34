#pragma once

// Append-only result cache and survey checkpoints.
//
// Cache file layout, one record per line, fields separated by TAB:
//
//   #gammacrit-cache v1
//   <kind> <n> <digits> <payload> <tool_version> <created_at>
//
// Records are never rewritten; a key that is already present is not
// stored again. Malformed lines (e.g. a torn final write) are skipped.

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "gammacrit/criteria.hpp"

namespace gammacrit {

inline constexpr std::string_view kToolVersion = "gammacrit-1.0";
inline constexpr std::string_view kCacheHeader = "#gammacrit-cache v1";
inline constexpr std::string_view kCacheEnvVar = "GAMMACRIT_CACHE_DIR";

enum class CacheKind { kDn, kExpTable, kLogS, kFrac, kGamma };
const char* to_string(CacheKind kind);
std::optional<CacheKind> parse_cache_kind(std::string_view text);

struct CacheKey {
  CacheKind kind = CacheKind::kFrac;
  std::uint32_t n = 0;
  long digits = 0;
  auto operator<=>(const CacheKey&) const = default;
};

struct CacheEntry {
  CacheKey key;
  std::string payload;
  std::string tool_version;
  std::string created_at;

  std::string to_line() const;
  /// Throws std::invalid_argument for anything that is not a full record.
  static CacheEntry parse_line(std::string_view line);
  bool operator==(const CacheEntry&) const = default;
};

/// Current UTC time as "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_timestamp();

class ResultCache {
 public:
  /// Opens (or creates) `file`. Throws std::runtime_error if the header
  /// names a different format.
  explicit ResultCache(std::filesystem::path file);

  /// `<dir>/results.tsv` for the directory in GAMMACRIT_CACHE_DIR, if set.
  static std::optional<std::filesystem::path> location_from_env();

  /// Entry for this key written by the current tool version.
  std::optional<CacheEntry> find(const CacheKey& key) const;
  /// Most precise current-version entry of (kind, n) with digits >= min_digits.
  std::optional<CacheEntry> find_best(CacheKind kind, std::uint32_t n, long min_digits) const;

  /// Appends a record; returns false (and writes nothing) if the key exists.
  bool put(const CacheKey& key, const std::string& payload);

  std::size_t size() const;
  const std::filesystem::path& file() const { return file_; }

 private:
  std::filesystem::path file_;
  mutable std::mutex mutex_;
  std::map<CacheKey, CacheEntry> entries_;
};

/// FracSource that consults `cache` first and records fresh results.
FracSource cached_source(ResultCache& cache, FracSource inner);

/// Progress of a survey written to a CSV file, stored next to it.
struct SurveyCheckpoint {
  std::string tool_version{kToolVersion};
  std::uint32_t n_from = 0;
  long digits = 0;
  std::uint32_t rows_done = 0;
  std::uint64_t csv_bytes = 0;  // length of the CSV after the last complete row
  BigRational frac_sum = 0;
  std::uint32_t frac_count = 0;

  std::string serialize() const;
  static SurveyCheckpoint parse(std::string_view text);

  static std::filesystem::path path_for(const std::filesystem::path& csv);
  /// Written to a temporary file, then renamed over the old one.
  void save(const std::filesystem::path& csv) const;
  static std::optional<SurveyCheckpoint> load(const std::filesystem::path& csv);
};

}  // namespace gammacrit
