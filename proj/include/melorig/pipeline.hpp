#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "melorig/corpus.hpp"
#include "melorig/originality.hpp"
#include "melorig/popularity.hpp"

namespace melorig {

// Flat key=value config, # comments, relative paths resolved against the
// config file's directory. Unknown keys are a BadConfig.
struct PipelineConfig {
  std::filesystem::path corpus_root;
  std::filesystem::path datasheet;
  std::filesystem::path out_dir = "out";
  std::string provider = "static";  // static | http
  std::filesystem::path popularity_csv;
  std::filesystem::path cache_path;
  std::string http_endpoint;
  std::string http_count_pattern;
  std::uint64_t http_min_interval_ms = 1000;
  std::uint64_t http_cache_ttl_s = 0;
  std::string http_user_agent;
  bool quote_exact = false;
  bool exclude_percussion = false;
  std::string method = "all";  // all | simonton | ngram
  int ngram_order = 3;
  int top_k = 5;
  bool leave_one_out = false;
  bool pooled_ttest = false;
  double alpha = 0.05;
  int threads = 0;  // 0 leaves the OpenMP default alone
  bool serial = false;
  bool strict = false;

  static PipelineConfig load(const std::filesystem::path& path);
  void validate() const;  // BadConfig on contradictions or missing inputs
  ProviderConfig provider_config() const;
  Method method_enum() const;
};

enum Stage : unsigned {
  kStageScan = 1u << 0,
  kStageMatrix = 1u << 1,
  kStageScore = 1u << 2,
  kStagePopularity = 1u << 3,
  kStageStats = 1u << 4,
  kStageReport = 1u << 5,
};
inline constexpr unsigned kAllStages =
    kStageScan | kStageMatrix | kStageScore | kStagePopularity | kStageStats |
    kStageReport;

// Adds the prerequisite stages of every requested stage.
unsigned expand_stages(unsigned requested);

struct PipelineResult {
  int exit_code = 0;
  std::size_t piece_count = 0;              // pieces scanned successfully
  std::vector<CorpusIssue> issues;          // skipped pieces, failed fetches
  std::vector<std::string> artifacts;       // files written, in order
};

// Runs the requested stages plus their prerequisites; artifacts are only
// written for the stages actually requested. Progress and the issue list
// go to log. Exit code: 0, or 1 when issues occurred under strict.
PipelineResult run_pipeline(const PipelineConfig& config, unsigned requested,
                            std::ostream& log);

}  // namespace melorig
