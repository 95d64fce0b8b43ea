#include "melorig/popularity.hpp"

#include <cstdio>
#include <cstdlib>
#include <regex>
#include <thread>

#include <httplib.h>

#include "melorig/csv.hpp"
#include "melorig/errors.hpp"

namespace melorig {

void ProviderConfig::validate() const {
  if (kind == ProviderKind::StaticCsv) {
    if (static_csv_path.empty())
      raise(Errc::BadConfig, "static csv provider needs a file path");
    return;
  }
  std::size_t first = endpoint_template.find("{query}");
  if (first == std::string::npos ||
      endpoint_template.find("{query}", first + 1) != std::string::npos)
    raise(Errc::BadConfig, "endpoint template must contain {query} exactly once");
  if (endpoint_template.rfind("http://", 0) != 0 &&
      endpoint_template.rfind("https://", 0) != 0)
    raise(Errc::BadConfig, "endpoint template must start with http:// or https://");
  if (min_interval_ms < 1000)
    raise(Errc::BadConfig, "http request interval must be at least 1 second");
  if (count_pattern.empty()) raise(Errc::BadConfig, "count pattern is empty");
  try {
    std::regex probe(count_pattern);
  } catch (const std::regex_error& err) {
    raise(Errc::BadConfig, std::string("bad count pattern: ") + err.what());
  }
}

std::string percent_encode(std::string_view text) {
  static constexpr char hex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(text.size());
  for (unsigned char c : text) {
    bool unreserved = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                      (c >= '0' && c <= '9') || c == '-' || c == '.' || c == '_' ||
                      c == '~';
    if (unreserved) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0xF];
    }
  }
  return out;
}

std::string build_query_url(const ProviderConfig& config, const std::string& title) {
  std::string query = config.quote_exact ? "\"" + title + "\"" : title;
  std::string encoded = percent_encode(query);
  std::string url = config.endpoint_template;
  std::size_t pos = url.find("{query}");
  if (pos == std::string::npos)
    raise(Errc::BadConfig, "endpoint template lacks {query}");
  url.replace(pos, 7, encoded);
  return url;
}

std::uint64_t parse_count_text(const std::string& text) {
  std::string digits;
  for (std::size_t i = 0; i < text.size();) {
    unsigned char c = text[i];
    if (c == ',' || c == '.' || c == ' ' || c == '\'') {
      ++i;
      continue;
    }
    if (c == 0xC2 && i + 1 < text.size() &&
        static_cast<unsigned char>(text[i + 1]) == 0xA0) {
      i += 2;  // non-breaking space
      continue;
    }
    if (c < '0' || c > '9')
      raise(Errc::PatternMiss, "count text is not a number: '" + text + "'");
    digits += static_cast<char>(c);
    ++i;
  }
  if (digits.empty())
    raise(Errc::PatternMiss, "count text has no digits: '" + text + "'");
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(digits.c_str(), &end, 10);
  if (errno == ERANGE || end != digits.c_str() + digits.size())
    raise(Errc::PatternMiss, "count out of range: '" + text + "'");
  return v;
}

std::string iso8601_utc(std::time_t t) {
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
  return buf;
}

std::optional<std::time_t> parse_iso8601_utc(const std::string& text) {
  std::tm tm{};
  int y, mo, d, h, mi, s;
  if (std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2dZ", &y, &mo, &d, &h, &mi, &s) != 6)
    return std::nullopt;
  tm.tm_year = y - 1900;
  tm.tm_mon = mo - 1;
  tm.tm_mday = d;
  tm.tm_hour = h;
  tm.tm_min = mi;
  tm.tm_sec = s;
  std::time_t t = timegm(&tm);
  if (t == static_cast<std::time_t>(-1)) return std::nullopt;
  return t;
}

std::vector<PopularityRecord> read_popularity_cache(const std::filesystem::path& path) {
  auto rows = csv::parse(csv::read_text_file(path));
  if (rows.empty() || rows[0] != csv::Row{"Title", "Count", "FetchedAt", "Provider"})
    raise(Errc::BadHeader, path.string() + ": bad cache header");
  std::vector<PopularityRecord> records;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 4)
      raise(Errc::IoError, path.string() + ": bad cache row " + std::to_string(i + 1));
    PopularityRecord rec;
    rec.title = rows[i][0];
    char* end = nullptr;
    rec.count = std::strtoull(rows[i][1].c_str(), &end, 10);
    if (rows[i][1].empty() || end != rows[i][1].c_str() + rows[i][1].size())
      raise(Errc::IoError, path.string() + ": bad cache count '" + rows[i][1] + "'");
    rec.fetched_at = rows[i][2];
    rec.provider = rows[i][3];
    records.push_back(std::move(rec));
  }
  return records;
}

void write_popularity_cache(std::span<const PopularityRecord> records,
                            const std::filesystem::path& path) {
  std::string text = "Title,Count,FetchedAt,Provider\n";
  for (const PopularityRecord& rec : records)
    text += csv::join({rec.title, std::to_string(rec.count), rec.fetched_at, rec.provider});
  csv::write_text_file(path, text);
}

PopularityProvider::PopularityProvider(ProviderConfig config)
    : config_(std::move(config)) {
  config_.validate();
  if (config_.kind == ProviderKind::StaticCsv) {
    auto rows = csv::parse(csv::read_text_file(config_.static_csv_path));
    if (rows.empty() || rows[0].size() < 2 || rows[0][0] != "Title" ||
        rows[0][1] != "Popularity")
      raise(Errc::BadHeader,
            config_.static_csv_path.string() + ": expected header Title,Popularity");
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].size() < 2)
        raise(Errc::IoError, config_.static_csv_path.string() + ": short row " +
                                 std::to_string(i + 1));
      char* end = nullptr;
      const std::string& cell = rows[i][1];
      std::uint64_t v = std::strtoull(cell.c_str(), &end, 10);
      if (cell.empty() || end != cell.c_str() + cell.size() || cell[0] == '-')
        raise(Errc::IoError,
              config_.static_csv_path.string() + ": bad count '" + cell + "'");
      static_table_[rows[i][0]] = v;
    }
  } else if (!config_.cache_path.empty() &&
             std::filesystem::exists(config_.cache_path)) {
    for (PopularityRecord& rec : read_popularity_cache(config_.cache_path))
      cache_[rec.title] = std::move(rec);
  }
}

PopularityRecord PopularityProvider::fetch(const std::string& title) {
  std::lock_guard<std::mutex> lock(mutex_);
  if (config_.kind == ProviderKind::StaticCsv) return fetch_static(title);
  return fetch_http(title);
}

PopularityRecord PopularityProvider::fetch_static(const std::string& title) {
  auto it = static_table_.find(title);
  if (it == static_table_.end())
    raise(Errc::MissingTitle, "'" + title + "' not in " + config_.static_csv_path.string());
  return {title, it->second, iso8601_utc(std::time(nullptr)), "static_csv"};
}

std::optional<PopularityRecord> PopularityProvider::cached_fresh(
    const std::string& title) const {
  auto it = cache_.find(title);
  if (it == cache_.end()) return std::nullopt;
  if (config_.cache_ttl_s == 0) return it->second;
  auto fetched = parse_iso8601_utc(it->second.fetched_at);
  if (!fetched) return std::nullopt;
  double age = std::difftime(std::time(nullptr), *fetched);
  if (age < 0 || age > static_cast<double>(config_.cache_ttl_s)) return std::nullopt;
  return it->second;
}

void PopularityProvider::remember(const PopularityRecord& record) {
  cache_[record.title] = record;
  if (config_.cache_path.empty()) return;
  std::vector<PopularityRecord> records;
  records.reserve(cache_.size());
  for (const auto& [_, rec] : cache_) records.push_back(rec);
  write_popularity_cache(records, config_.cache_path);
}

PopularityRecord PopularityProvider::fetch_http(const std::string& title) {
  if (auto hit = cached_fresh(title)) return *hit;

  if (last_request_start_)
    std::this_thread::sleep_until(*last_request_start_ +
                                  std::chrono::milliseconds(config_.min_interval_ms));
  last_request_start_ = std::chrono::steady_clock::now();

  std::string url = build_query_url(config_, title);
  std::size_t scheme_end = url.find("://") + 3;
  std::size_t slash = url.find('/', scheme_end);
  std::string base = slash == std::string::npos ? url : url.substr(0, slash);
  std::string path = slash == std::string::npos ? "/" : url.substr(slash);

  httplib::Client client(base);
  httplib::Headers headers;
  if (!config_.user_agent.empty()) headers.emplace("User-Agent", config_.user_agent);
  auto res = client.Get(path, headers);
  if (!res)
    raise(Errc::NetworkError,
          "GET " + url + " failed: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300)
    raise(Errc::NetworkError, "GET " + url + " returned status " +
                                  std::to_string(res->status));

  std::regex pattern(config_.count_pattern);
  std::smatch match;
  if (!std::regex_search(res->body, match, pattern))
    raise(Errc::PatternMiss, "count pattern found no match for '" + title + "'");
  std::string text = match.size() > 1 ? match[1].str() : match[0].str();

  PopularityRecord record{title, parse_count_text(text),
                          iso8601_utc(std::time(nullptr)), "http"};
  remember(record);
  return record;
}

AnnotateReport PopularityProvider::annotate(const CorpusIndex& index) {
  AnnotateReport report;
  for (const CorpusEntry& entry : index.entries) {
    try {
      report.records.push_back(fetch(entry.title));
    } catch (const Error& err) {
      report.failures.push_back({entry.title, err.what()});
    }
  }
  return report;
}

}  // namespace melorig
