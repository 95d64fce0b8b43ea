#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "melorig/corpus.hpp"

namespace melorig {

struct PopularityRecord {
  std::string title;
  std::uint64_t count = 0;
  std::string fetched_at;  // ISO-8601 UTC
  std::string provider;

  bool operator==(const PopularityRecord&) const = default;
};

enum class ProviderKind { StaticCsv, Http };

struct ProviderConfig {
  ProviderKind kind = ProviderKind::StaticCsv;
  std::filesystem::path static_csv_path;  // StaticCsv: header Title,Popularity
  std::string endpoint_template;          // Http: exactly one {query}
  std::string count_pattern;              // Http: regex, group 1 is the count
  std::uint64_t min_interval_ms = 1000;   // Http: >= 1000
  std::filesystem::path cache_path;       // Http: optional persistent cache
  std::uint64_t cache_ttl_s = 0;          // 0 keeps cached entries forever
  std::string user_agent;
  bool quote_exact = false;  // wrap the title in quotation marks in the query

  // Throws BadConfig on violations (missing csv path, malformed template or
  // pattern, sub-second interval).
  void validate() const;
};

// RFC 3986: everything but unreserved characters escaped, uppercase hex.
std::string percent_encode(std::string_view text);

// Substitutes the percent-encoded (optionally quoted) title into {query}.
std::string build_query_url(const ProviderConfig& config, const std::string& title);

// Digits with thousands separators (comma, period, space, apostrophe,
// non-breaking space) stripped; anything else is a PatternMiss.
std::uint64_t parse_count_text(const std::string& text);

std::string iso8601_utc(std::time_t t);
std::optional<std::time_t> parse_iso8601_utc(const std::string& text);

// Cache file columns: Title,Count,FetchedAt,Provider.
std::vector<PopularityRecord> read_popularity_cache(const std::filesystem::path& path);
void write_popularity_cache(std::span<const PopularityRecord> records,
                            const std::filesystem::path& path);

struct PopularityFailure {
  std::string title;
  std::string message;
};

struct AnnotateReport {
  std::vector<PopularityRecord> records;
  std::vector<PopularityFailure> failures;
};

class PopularityProvider {
 public:
  explicit PopularityProvider(ProviderConfig config);

  // StaticCsv: table lookup, MissingTitle when absent. Http: rate-limited
  // GET (plain http; request starts >= min_interval apart), fresh cache
  // hits short-circuit the request; NetworkError and PatternMiss as they
  // say.
  PopularityRecord fetch(const std::string& title);

  // One record per index entry; per-title errors collected, not thrown.
  AnnotateReport annotate(const CorpusIndex& index);

  const ProviderConfig& config() const { return config_; }

 private:
  PopularityRecord fetch_static(const std::string& title);
  PopularityRecord fetch_http(const std::string& title);
  std::optional<PopularityRecord> cached_fresh(const std::string& title) const;
  void remember(const PopularityRecord& record);

  ProviderConfig config_;
  std::map<std::string, std::uint64_t> static_table_;
  std::map<std::string, PopularityRecord> cache_;
  std::optional<std::chrono::steady_clock::time_point> last_request_start_;
  std::mutex mutex_;
};

}  // namespace melorig
