#include "melorig/corpus.hpp"

#include <optional>

#include "melorig/datasheet.hpp"
#include "melorig/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace melorig {

ScanReport scan_corpus(const std::filesystem::path& root,
                       const std::filesystem::path& datasheet_path) {
  auto records = read_datasheet(datasheet_path);
  ScanReport report;
  report.index.root = root;
  for (const PieceRecord& rec : records) {
    std::filesystem::path file = root / rec.file_name;
    if (!std::filesystem::exists(file)) {
      report.issues.push_back(
          {rec.file_name, "MissingFile: " + file.string() + " not found"});
      continue;
    }
    report.index.entries.push_back({rec.file_name, rec.title, rec.composer});
  }
  return report;
}

namespace {

struct ExtractSlot {
  std::optional<PitchClassSequence> seq;
  std::optional<CorpusIssue> issue;
};

ExtractSlot extract_one(const CorpusIndex& index, const CorpusEntry& entry,
                        const ExtractionConfig& config) {
  ExtractSlot slot;
  try {
    auto doc = parse_midi_file(index.root / entry.file_name);
    slot.seq = extract_sequence(doc, config, entry.file_name);
  } catch (const Error& err) {
    slot.issue = CorpusIssue{entry.file_name, err.what()};
  }
  return slot;
}

ExtractReport compact(std::vector<ExtractSlot>&& slots) {
  ExtractReport report;
  for (ExtractSlot& slot : slots) {
    if (slot.seq) report.sequences.push_back(std::move(*slot.seq));
    if (slot.issue) report.issues.push_back(std::move(*slot.issue));
  }
  return report;
}

struct ScoreSlot {
  std::optional<OriginalityScore> score;
  std::optional<CorpusIssue> issue;
};

ScoreReport compact(std::vector<ScoreSlot>&& slots) {
  ScoreReport report;
  for (ScoreSlot& slot : slots) {
    if (slot.score) report.scores.push_back(std::move(*slot.score));
    if (slot.issue) report.issues.push_back(std::move(*slot.issue));
  }
  return report;
}

void require_scorable(Method method) {
  if (method != Method::AllNotes && method != Method::Simonton)
    raise(Errc::BadOrder, "score_corpus handles AllNotes and Simonton only");
}

OriginalityScore score_one(const PitchClassSequence& seq, const StochasticMatrix& m,
                           Method method) {
  return method == Method::Simonton ? originality_simonton(seq, m)
                                    : originality_all_notes(seq, m);
}

ScoreSlot try_score(const PitchClassSequence& seq, const StochasticMatrix& m,
                    Method method) {
  ScoreSlot slot;
  try {
    slot.score = score_one(seq, m, method);
  } catch (const Error& err) {
    slot.issue = CorpusIssue{seq.piece_id, err.what()};
  }
  return slot;
}

ScoreSlot try_score_ngram(const PitchClassSequence& seq, const NgramCounts& windows,
                          const NgramCounts& prefixes, int order) {
  ScoreSlot slot;
  try {
    slot.score = originality_ngram(seq, windows, prefixes, order);
  } catch (const Error& err) {
    slot.issue = CorpusIssue{seq.piece_id, err.what()};
  }
  return slot;
}

ScoreSlot try_score_loo(const PitchClassSequence& seq, const CountMatrix& corpus_counts,
                        Method method) {
  ScoreSlot slot;
  try {
    CountMatrix rest = subtract_counts(corpus_counts, count_transitions(seq));
    slot.score = score_one(seq, normalize(rest), method);
  } catch (const Error& err) {
    slot.issue = CorpusIssue{seq.piece_id, err.what()};
  }
  return slot;
}

}  // namespace

ExtractReport extract_corpus_serial(const CorpusIndex& index,
                                    const ExtractionConfig& config) {
  std::vector<ExtractSlot> slots(index.entries.size());
  for (std::size_t i = 0; i < index.entries.size(); ++i)
    slots[i] = extract_one(index, index.entries[i], config);
  return compact(std::move(slots));
}

ExtractReport extract_corpus(const CorpusIndex& index, const ExtractionConfig& config) {
#ifdef _OPENMP
  std::vector<ExtractSlot> slots(index.entries.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < index.entries.size(); ++i)
    slots[i] = extract_one(index, index.entries[i], config);
  return compact(std::move(slots));
#else
  return extract_corpus_serial(index, config);
#endif
}

CountMatrix corpus_count_matrix_serial(std::span<const PitchClassSequence> seqs) {
  CountMatrix total;
  for (const PitchClassSequence& seq : seqs) accumulate_transitions(total, seq);
  return total;
}

CountMatrix corpus_count_matrix(std::span<const PitchClassSequence> seqs) {
#ifdef _OPENMP
  CountMatrix total;
#pragma omp parallel
  {
    CountMatrix local;
#pragma omp for schedule(static) nowait
    for (std::size_t i = 0; i < seqs.size(); ++i)
      accumulate_transitions(local, seqs[i]);
#pragma omp critical(melorig_count_merge)
    total = merge_counts(total, local);
  }
  return total;
#else
  return corpus_count_matrix_serial(seqs);
#endif
}

NgramCounts corpus_ngram_counts_serial(std::span<const PitchClassSequence> seqs,
                                       int order) {
  NgramCounts total(order);
  for (const PitchClassSequence& seq : seqs) merge_ngrams(total, count_ngrams(seq, order));
  return total;
}

NgramCounts corpus_ngram_counts(std::span<const PitchClassSequence> seqs, int order) {
#ifdef _OPENMP
  NgramCounts total(order);
#pragma omp parallel
  {
    NgramCounts local(order);
#pragma omp for schedule(static) nowait
    for (std::size_t i = 0; i < seqs.size(); ++i)
      merge_ngrams(local, count_ngrams(seqs[i], order));
#pragma omp critical(melorig_ngram_merge)
    merge_ngrams(total, local);
  }
  return total;
#else
  return corpus_ngram_counts_serial(seqs, order);
#endif
}

ScoreReport score_corpus_serial(std::span<const PitchClassSequence> seqs,
                                const StochasticMatrix& matrix, Method method) {
  require_scorable(method);
  std::vector<ScoreSlot> slots(seqs.size());
  for (std::size_t i = 0; i < seqs.size(); ++i)
    slots[i] = try_score(seqs[i], matrix, method);
  return compact(std::move(slots));
}

ScoreReport score_corpus(std::span<const PitchClassSequence> seqs,
                         const StochasticMatrix& matrix, Method method) {
  require_scorable(method);
#ifdef _OPENMP
  std::vector<ScoreSlot> slots(seqs.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < seqs.size(); ++i)
    slots[i] = try_score(seqs[i], matrix, method);
  return compact(std::move(slots));
#else
  return score_corpus_serial(seqs, matrix, method);
#endif
}

ScoreReport score_corpus_ngram_serial(std::span<const PitchClassSequence> seqs,
                                      const NgramCounts& windows,
                                      const NgramCounts& prefixes, int order) {
  std::vector<ScoreSlot> slots(seqs.size());
  for (std::size_t i = 0; i < seqs.size(); ++i)
    slots[i] = try_score_ngram(seqs[i], windows, prefixes, order);
  return compact(std::move(slots));
}

ScoreReport score_corpus_ngram(std::span<const PitchClassSequence> seqs,
                               const NgramCounts& windows, const NgramCounts& prefixes,
                               int order) {
#ifdef _OPENMP
  std::vector<ScoreSlot> slots(seqs.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < seqs.size(); ++i)
    slots[i] = try_score_ngram(seqs[i], windows, prefixes, order);
  return compact(std::move(slots));
#else
  return score_corpus_ngram_serial(seqs, windows, prefixes, order);
#endif
}

ScoreReport score_corpus_leave_one_out_serial(std::span<const PitchClassSequence> seqs,
                                              const CountMatrix& corpus_counts,
                                              Method method) {
  require_scorable(method);
  std::vector<ScoreSlot> slots(seqs.size());
  for (std::size_t i = 0; i < seqs.size(); ++i)
    slots[i] = try_score_loo(seqs[i], corpus_counts, method);
  return compact(std::move(slots));
}

ScoreReport score_corpus_leave_one_out(std::span<const PitchClassSequence> seqs,
                                       const CountMatrix& corpus_counts, Method method) {
  require_scorable(method);
#ifdef _OPENMP
  std::vector<ScoreSlot> slots(seqs.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < seqs.size(); ++i)
    slots[i] = try_score_loo(seqs[i], corpus_counts, method);
  return compact(std::move(slots));
#else
  return score_corpus_leave_one_out_serial(seqs, corpus_counts, method);
#endif
}

}  // namespace melorig
