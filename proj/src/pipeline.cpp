#include "melorig/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <unordered_map>

#include "melorig/csv.hpp"
#include "melorig/datasheet.hpp"
#include "melorig/errors.hpp"
#include "melorig/stats.hpp"
#include "melorig/svg_charts.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace melorig {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "no" || value == "0") return false;
  raise(Errc::BadConfig, "key '" + key + "' wants a boolean, got '" + value + "'");
}

long long parse_int(const std::string& key, const std::string& value) {
  char* end = nullptr;
  long long v = std::strtoll(value.c_str(), &end, 10);
  if (value.empty() || end != value.c_str() + value.size())
    raise(Errc::BadConfig, "key '" + key + "' wants an integer, got '" + value + "'");
  return v;
}

double parse_real(const std::string& key, const std::string& value) {
  char* end = nullptr;
  double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size())
    raise(Errc::BadConfig, "key '" + key + "' wants a number, got '" + value + "'");
  return v;
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& value) {
  std::filesystem::path p(value);
  return p.is_absolute() ? p : base / p;
}

}  // namespace

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  std::string text;
  try {
    text = csv::read_text_file(path);
  } catch (const Error& err) {
    raise(Errc::BadConfig, std::string("cannot read config: ") + err.what());
  }
  std::filesystem::path base = path.has_parent_path()
                                   ? path.parent_path()
                                   : std::filesystem::path(".");
  PipelineConfig cfg;
  cfg.out_dir = base / "out";

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos
                                                                 : eol - pos);
    pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      raise(Errc::BadConfig, path.string() + ":" + std::to_string(line_no) +
                                 ": expected key=value, got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));

    if (key == "corpus_root") cfg.corpus_root = resolve(base, value);
    else if (key == "datasheet") cfg.datasheet = resolve(base, value);
    else if (key == "out_dir") cfg.out_dir = resolve(base, value);
    else if (key == "provider") cfg.provider = value;
    else if (key == "popularity_csv") cfg.popularity_csv = resolve(base, value);
    else if (key == "cache_path") cfg.cache_path = resolve(base, value);
    else if (key == "http_endpoint") cfg.http_endpoint = value;
    else if (key == "http_count_pattern") cfg.http_count_pattern = value;
    else if (key == "http_min_interval_ms")
      cfg.http_min_interval_ms = static_cast<std::uint64_t>(
          std::max(0LL, parse_int(key, value)));
    else if (key == "http_cache_ttl_s")
      cfg.http_cache_ttl_s = static_cast<std::uint64_t>(
          std::max(0LL, parse_int(key, value)));
    else if (key == "http_user_agent") cfg.http_user_agent = value;
    else if (key == "quote_exact") cfg.quote_exact = parse_bool(key, value);
    else if (key == "exclude_percussion")
      cfg.exclude_percussion = parse_bool(key, value);
    else if (key == "method") cfg.method = value;
    else if (key == "ngram_order") cfg.ngram_order = static_cast<int>(parse_int(key, value));
    else if (key == "top_k") cfg.top_k = static_cast<int>(parse_int(key, value));
    else if (key == "leave_one_out") cfg.leave_one_out = parse_bool(key, value);
    else if (key == "pooled_ttest") cfg.pooled_ttest = parse_bool(key, value);
    else if (key == "alpha") cfg.alpha = parse_real(key, value);
    else if (key == "threads") cfg.threads = static_cast<int>(parse_int(key, value));
    else if (key == "serial") cfg.serial = parse_bool(key, value);
    else if (key == "strict") cfg.strict = parse_bool(key, value);
    else
      raise(Errc::BadConfig, path.string() + ":" + std::to_string(line_no) +
                                 ": unknown key '" + key + "'");
  }
  return cfg;
}

void PipelineConfig::validate() const {
  if (corpus_root.empty()) raise(Errc::BadConfig, "corpus_root is not set");
  if (datasheet.empty()) raise(Errc::BadConfig, "datasheet is not set");
  if (out_dir.empty()) raise(Errc::BadConfig, "out_dir is not set");
  if (provider != "static" && provider != "http")
    raise(Errc::BadConfig, "provider must be static or http, got '" + provider + "'");
  if (method != "all" && method != "simonton" && method != "ngram")
    raise(Errc::BadConfig,
          "method must be all, simonton or ngram, got '" + method + "'");
  if (method == "ngram" && (ngram_order < 3 || ngram_order > NgramCounts::kMaxOrder))
    raise(Errc::BadConfig, "ngram_order must be in [3,8], got " +
                               std::to_string(ngram_order));
  if (method == "ngram" && leave_one_out)
    raise(Errc::BadConfig, "leave_one_out works with the all and simonton methods");
  if (top_k < 1) raise(Errc::BadConfig, "top_k must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) raise(Errc::BadConfig, "alpha must be in (0,1)");
  if (threads < 0) raise(Errc::BadConfig, "threads must be non-negative");
}

ProviderConfig PipelineConfig::provider_config() const {
  ProviderConfig pc;
  if (provider == "static") {
    pc.kind = ProviderKind::StaticCsv;
    if (popularity_csv.empty())
      raise(Errc::BadConfig, "static provider needs popularity_csv");
    pc.static_csv_path = popularity_csv;
  } else {
    pc.kind = ProviderKind::Http;
    pc.endpoint_template = http_endpoint;
    pc.count_pattern = http_count_pattern;
    pc.min_interval_ms = http_min_interval_ms;
    pc.cache_ttl_s = http_cache_ttl_s;
    pc.user_agent = http_user_agent;
  }
  pc.cache_path = cache_path;
  pc.quote_exact = quote_exact;
  return pc;
}

Method PipelineConfig::method_enum() const {
  if (method == "simonton") return Method::Simonton;
  if (method == "ngram") return Method::Ngram;
  return Method::AllNotes;
}

unsigned expand_stages(unsigned requested) {
  unsigned needed = requested;
  if (needed & kStageReport) needed |= kStageStats;
  if (needed & kStageStats) needed |= kStageScore | kStagePopularity;
  if (needed & kStageScore) needed |= kStageMatrix;
  if (needed & (kStageMatrix | kStagePopularity)) needed |= kStageScan;
  return needed;
}

namespace {

std::string full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string report_num(double v, const char* format) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string side_by_side(const std::string& ll, const std::string& lv,
                         const std::string& rl, const std::string& rv) {
  std::string left = ll + pad_left(lv, 38 - ll.size());
  std::string right = rl + pad_left(rv, 43 - rl.size());
  return left + "   " + right + "\n";
}

std::string ols_report_text(const OlsResult& o, const std::string& dep_name,
                            const std::string& x_name) {
  const std::string rule(84, '=');
  std::string text;
  text += pad_left("OLS Regression Results", 53) + "\n" + rule + "\n";
  text += side_by_side("Dep. Variable:", dep_name, "R-squared (uncentered):",
                       report_num(o.r2_uncentered, "%.3f"));
  text += side_by_side("Model:", "OLS", "Adj. R-squared (uncentered):",
                       report_num(o.r2_adj_uncentered, "%.3f"));
  text += side_by_side("Method:", "Least Squares", "F-statistic:",
                       report_num(o.f_stat, "%.4g"));
  text += side_by_side("No. Observations:", std::to_string(o.n),
                       "Prob (F-statistic):", report_num(o.p_value, "%.3g"));
  text += side_by_side("Df Residuals:", std::to_string(o.n - 1), "Log-Likelihood:",
                       report_num(o.log_likelihood, "%.5g"));
  text += side_by_side("Df Model:", "1", "AIC:", report_num(o.aic, "%.5g"));
  text += side_by_side("", "", "BIC:", report_num(o.bic, "%.5g"));
  text += rule + "\n";

  text += pad_left("coef", 27) + pad_left("std err", 11) + pad_left("t", 11) +
          pad_left("P>|t|", 11) + pad_left("[0.025", 12) + pad_left("0.975]", 12) +
          "\n";
  text += std::string(84, '-') + "\n";
  std::string row = x_name;
  row += pad_left(report_num(o.coef, "%.4g"), 27 - x_name.size());
  row += pad_left(report_num(o.std_err, "%.3g"), 11);
  row += pad_left(report_num(o.t_stat, "%.3f"), 11);
  row += pad_left(report_num(o.p_value, "%.3f"), 11);
  row += pad_left(report_num(o.ci_low, "%.3g"), 12);
  row += pad_left(report_num(o.ci_high, "%.3g"), 12);
  text += row + "\n" + rule + "\n";

  text += side_by_side("Durbin-Watson:", report_num(o.durbin_watson, "%.3f"),
                       "Jarque-Bera (JB):", report_num(o.jarque_bera, "%.3f"));
  text += side_by_side("Skew:", report_num(o.skew, "%.3f"), "Prob(JB):",
                       report_num(o.jb_p, "%.3g"));
  text += side_by_side("Kurtosis:", report_num(o.kurtosis, "%.3f"), "Cond. No.",
                       "1.00");
  text += rule + "\n\nNotes:\n";
  text += "[1] R-squared is computed without centering (uncentered) since the model "
          "does not contain a constant.\n";
  text += "[2] Standard Errors assume that the covariance matrix of the errors is "
          "correctly specified.\n";
  return text;
}

void append_issues(std::vector<CorpusIssue>& into, const std::vector<CorpusIssue>& more) {
  into.insert(into.end(), more.begin(), more.end());
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg, unsigned requested,
                            std::ostream& log) {
  cfg.validate();
  unsigned needed = expand_stages(requested);
  PipelineResult result;

  auto note_artifact = [&](const std::filesystem::path& p) {
    result.artifacts.push_back(p.string());
  };

#ifdef _OPENMP
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif

  ScanReport scan = scan_corpus(cfg.corpus_root, cfg.datasheet);
  append_issues(result.issues, scan.issues);
  result.piece_count = scan.index.entries.size();
  log << "scanned " << scan.index.entries.size() << " pieces ("
      << scan.issues.size() << " datasheet rows skipped)\n";

  std::vector<PieceRecord> records = read_datasheet(cfg.datasheet);
  std::unordered_map<std::string, std::string> composer_of;
  std::unordered_map<std::string, std::string> title_of;
  for (const CorpusEntry& e : scan.index.entries) {
    composer_of[e.file_name] = e.composer;
    title_of[e.file_name] = e.title;
  }

  if ((requested & ~kStageScan) != 0)
    std::filesystem::create_directories(cfg.out_dir);

  ExtractReport extracted;
  CountMatrix counts;
  StochasticMatrix probs;
  if (needed & kStageMatrix) {
    ExtractionConfig exc;
    exc.exclude_percussion = cfg.exclude_percussion;
    extracted = cfg.serial ? extract_corpus_serial(scan.index, exc)
                           : extract_corpus(scan.index, exc);
    append_issues(result.issues, extracted.issues);
    counts = cfg.serial ? corpus_count_matrix_serial(extracted.sequences)
                        : corpus_count_matrix(extracted.sequences);
    probs = normalize(counts);
    log << "extracted " << extracted.sequences.size() << " sequences, "
        << counts.total_bigrams << " bigrams\n";
    if (requested & kStageMatrix) {
      auto counts_path = cfg.out_dir / "transition_counts.csv";
      auto probs_path = cfg.out_dir / "transition_probs.csv";
      write_count_matrix_csv(counts, counts_path);
      write_stochastic_matrix_csv(probs, probs_path);
      note_artifact(counts_path);
      note_artifact(probs_path);
    }
  }

  ScoreReport scored;
  if (needed & kStageScore) {
    if (cfg.method == "ngram") {
      NgramCounts windows =
          cfg.serial ? corpus_ngram_counts_serial(extracted.sequences, cfg.ngram_order)
                     : corpus_ngram_counts(extracted.sequences, cfg.ngram_order);
      NgramCounts prefixes =
          cfg.serial
              ? corpus_ngram_counts_serial(extracted.sequences, cfg.ngram_order - 1)
              : corpus_ngram_counts(extracted.sequences, cfg.ngram_order - 1);
      scored = cfg.serial ? score_corpus_ngram_serial(extracted.sequences, windows,
                                                      prefixes, cfg.ngram_order)
                          : score_corpus_ngram(extracted.sequences, windows, prefixes,
                                               cfg.ngram_order);
    } else if (cfg.leave_one_out) {
      scored = cfg.serial
                   ? score_corpus_leave_one_out_serial(extracted.sequences, counts,
                                                       cfg.method_enum())
                   : score_corpus_leave_one_out(extracted.sequences, counts,
                                                cfg.method_enum());
    } else {
      scored = cfg.serial
                   ? score_corpus_serial(extracted.sequences, probs, cfg.method_enum())
                   : score_corpus(extracted.sequences, probs, cfg.method_enum());
    }
    append_issues(result.issues, scored.issues);
    log << "scored " << scored.scores.size() << " pieces (method " << cfg.method
        << ")\n";

    std::unordered_map<std::string, double> score_of;
    for (const OriginalityScore& s : scored.scores) score_of[s.piece_id] = s.value;
    for (PieceRecord& rec : records) {
      auto it = score_of.find(rec.file_name);
      if (it != score_of.end()) rec.originality = it->second;
    }

    if (requested & kStageScore) {
      std::vector<RankEntry> entries;
      for (const OriginalityScore& s : scored.scores)
        entries.push_back(
            {title_of[s.piece_id], composer_of[s.piece_id], s.value});
      auto ranked = rank_pieces(entries, static_cast<std::size_t>(cfg.top_k));
      auto ranked_path = cfg.out_dir / "ranked.csv";
      write_ranked_table(ranked, ranked_path);
      note_artifact(ranked_path);
    }
  }

  if (needed & kStagePopularity) {
    PopularityProvider provider(cfg.provider_config());
    AnnotateReport annotated = provider.annotate(scan.index);
    for (const PopularityFailure& f : annotated.failures)
      result.issues.push_back({f.title, f.message});
    log << "popularity: " << annotated.records.size() << " counts, "
        << annotated.failures.size() << " failures\n";

    std::unordered_map<std::string, std::uint64_t> count_of;
    for (const PopularityRecord& rec : annotated.records)
      count_of[rec.title] = rec.count;
    for (PieceRecord& rec : records) {
      auto it = count_of.find(rec.title);
      if (it != count_of.end()) rec.popularity = it->second;
    }
  }

  if (requested & (kStageScore | kStagePopularity)) {
    auto sheet_path = cfg.out_dir / "datasheet.csv";
    write_datasheet(records, sheet_path);
    note_artifact(sheet_path);
  }

  std::optional<RegressionResult> linear;
  if (needed & kStageStats) {
    std::vector<double> xs, ys;
    std::map<std::string, std::vector<double>> by_composer;
    for (const PieceRecord& rec : records) {
      if (!rec.originality) continue;
      auto comp = composer_of.find(rec.file_name);
      if (comp != composer_of.end())
        by_composer[comp->second].push_back(*rec.originality);
      if (rec.popularity) {
        xs.push_back(static_cast<double>(*rec.popularity));
        ys.push_back(*rec.originality);
      }
    }

    std::optional<OlsResult> ols;
    std::optional<QuadraticFit> quad;
    try {
      linear = linear_regression(xs, ys);
    } catch (const Error& err) {
      result.issues.push_back({"stats/linear_regression", err.what()});
    }
    try {
      ols = ols_no_intercept(ys, xs);
    } catch (const Error& err) {
      result.issues.push_back({"stats/ols_no_intercept", err.what()});
    }
    try {
      quad = quadratic_fit(xs, ys);
    } catch (const Error& err) {
      result.issues.push_back({"stats/quadratic_fit", err.what()});
    }

    PairwiseReport pairwise;
    try {
      pairwise = pairwise_group_tests(by_composer, cfg.alpha, cfg.pooled_ttest);
      for (const PairwiseFailure& f : pairwise.failures)
        result.issues.push_back({f.group_a + " and " + f.group_b, f.message});
    } catch (const Error& err) {
      result.issues.push_back({"stats/pairwise", err.what()});
    }
    log << "stats: " << xs.size() << " joined records, " << pairwise.tests.size()
        << " pairwise tests\n";

    if (requested & kStageStats) {
      if (ols) {
        auto ols_path = cfg.out_dir / "ols_report.txt";
        csv::write_text_file(ols_path,
                             ols_report_text(*ols, "Melodic Originality", "Popularity"));
        note_artifact(ols_path);
      }

      auto ttests_path = cfg.out_dir / "ttests.csv";
      std::string text =
          "Pair,Result,T Statistic,P Value,Df,Mean A,Mean B,N A,N B,Significant\n";
      for (const PairwiseTest& pt : pairwise.tests) {
        text += csv::join({pt.group_a + " and " + pt.group_b,
                           format_ttest_result(pt.test), full(pt.test.t_stat),
                           full(pt.test.p_value), full(pt.test.df), full(pt.test.mean_a),
                           full(pt.test.mean_b), std::to_string(pt.test.n_a),
                           std::to_string(pt.test.n_b), pt.significant ? "yes" : "no"});
      }
      csv::write_text_file(ttests_path, text);
      note_artifact(ttests_path);

      auto reg_path = cfg.out_dir / "regression.csv";
      std::string reg = "Model,Field,Value\n";
      auto put = [&reg](const char* model, const char* field, const std::string& v) {
        reg += csv::join({model, field, v});
      };
      if (linear) {
        put("linear", "slope", full(linear->slope));
        put("linear", "intercept", full(linear->intercept));
        put("linear", "r", full(linear->r));
        put("linear", "r_squared", full(linear->r_squared));
        put("linear", "p_value", full(linear->p_value));
        put("linear", "stderr_slope", full(linear->stderr_slope));
        put("linear", "n", std::to_string(linear->n));
      }
      if (ols) {
        put("ols_no_intercept", "coef", full(ols->coef));
        put("ols_no_intercept", "std_err", full(ols->std_err));
        put("ols_no_intercept", "t_stat", full(ols->t_stat));
        put("ols_no_intercept", "p_value", full(ols->p_value));
        put("ols_no_intercept", "ci_low", full(ols->ci_low));
        put("ols_no_intercept", "ci_high", full(ols->ci_high));
        put("ols_no_intercept", "r2_uncentered", full(ols->r2_uncentered));
        put("ols_no_intercept", "r2_adj_uncentered", full(ols->r2_adj_uncentered));
        put("ols_no_intercept", "f_stat", full(ols->f_stat));
        put("ols_no_intercept", "log_likelihood", full(ols->log_likelihood));
        put("ols_no_intercept", "aic", full(ols->aic));
        put("ols_no_intercept", "bic", full(ols->bic));
        put("ols_no_intercept", "durbin_watson", full(ols->durbin_watson));
        put("ols_no_intercept", "jarque_bera", full(ols->jarque_bera));
        put("ols_no_intercept", "jb_p", full(ols->jb_p));
        put("ols_no_intercept", "skew", full(ols->skew));
        put("ols_no_intercept", "kurtosis", full(ols->kurtosis));
        put("ols_no_intercept", "n", std::to_string(ols->n));
      }
      if (quad) {
        put("quadratic", "c0", full(quad->c0));
        put("quadratic", "c1", full(quad->c1));
        put("quadratic", "c2", full(quad->c2));
        put("quadratic", "r_squared", full(quad->r_squared));
        put("quadratic", "n", std::to_string(quad->n));
      }
      csv::write_text_file(reg_path, reg);
      note_artifact(reg_path);
    }
  }

  if (requested & kStageReport) {
    try {
      auto heat_path = cfg.out_dir / "heatmap.svg";
      emit_heatmap(probs, heat_path);
      note_artifact(heat_path);
      note_artifact(cfg.out_dir / "heatmap.csv");
    } catch (const Error& err) {
      result.issues.push_back({"report/heatmap", err.what()});
    }

    std::vector<PieceRecord> complete;
    for (const PieceRecord& rec : records)
      if (rec.originality && rec.popularity) complete.push_back(rec);

    try {
      auto path = cfg.out_dir / "scatter_regression.svg";
      emit_scatter(complete, ScatterMode::Regression, linear, path);
      note_artifact(path);
    } catch (const Error& err) {
      result.issues.push_back({"report/scatter_regression", err.what()});
    }
    try {
      auto path = cfg.out_dir / "scatter_by_composer.svg";
      emit_scatter(complete, ScatterMode::ByComposer, std::nullopt, path);
      note_artifact(path);
    } catch (const Error& err) {
      result.issues.push_back({"report/scatter_by_composer", err.what()});
    }

    std::map<std::string, std::vector<double>> by_composer;
    for (const PieceRecord& rec : records) {
      if (!rec.originality) continue;
      auto comp = composer_of.find(rec.file_name);
      if (comp != composer_of.end())
        by_composer[comp->second].push_back(*rec.originality);
    }
    try {
      auto path = cfg.out_dir / "box_plot.svg";
      emit_box_plot(by_composer, path);
      note_artifact(path);
      note_artifact(cfg.out_dir / "box_plot.csv");
    } catch (const Error& err) {
      result.issues.push_back({"report/box_plot", err.what()});
    }
  }

  for (const std::string& artifact : result.artifacts) log << "wrote " << artifact << "\n";
  if (!result.issues.empty()) {
    log << "issues (" << result.issues.size() << "):\n";
    for (const CorpusIssue& issue : result.issues)
      log << "  " << issue.piece_id << ": " << issue.message << "\n";
  }

  result.exit_code = result.issues.empty() ? 0 : (cfg.strict ? 1 : 0);
  log << (result.exit_code == 0 ? "done" : "done with failures (strict)") << "\n";
  return result;
}

}  // namespace melorig
