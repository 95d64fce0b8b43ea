#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "melorig/midi.hpp"
#include "melorig/originality.hpp"
#include "melorig/transitions.hpp"

namespace melorig {

struct CorpusEntry {
  std::string file_name;
  std::string title;
  std::string composer;
};

struct CorpusIndex {
  std::filesystem::path root;
  std::vector<CorpusEntry> entries;
};

struct CorpusIssue {
  std::string piece_id;
  std::string message;
};

struct ScanReport {
  CorpusIndex index;
  std::vector<CorpusIssue> issues;  // rows skipped and why
};

// Reads the datasheet and keeps the rows whose MIDI file exists under
// root; rows with missing files become issues. Throws BadHeader when the
// datasheet lacks the required columns.
ScanReport scan_corpus(const std::filesystem::path& root,
                       const std::filesystem::path& datasheet_path);

struct ExtractReport {
  std::vector<PitchClassSequence> sequences;  // index order, failures removed
  std::vector<CorpusIssue> issues;
};

// The corpus kernels below come in pairs: the plain name runs the OpenMP
// path when compiled with it, the _serial twin is the reference the tests
// and the benchmark compare against. Results are identical by construction
// (integer counts merge associatively; per-piece scores do not depend on
// sibling pieces).

ExtractReport extract_corpus(const CorpusIndex& index,
                             const ExtractionConfig& config = {});
ExtractReport extract_corpus_serial(const CorpusIndex& index,
                                    const ExtractionConfig& config = {});

CountMatrix corpus_count_matrix(std::span<const PitchClassSequence> seqs);
CountMatrix corpus_count_matrix_serial(std::span<const PitchClassSequence> seqs);

NgramCounts corpus_ngram_counts(std::span<const PitchClassSequence> seqs, int order);
NgramCounts corpus_ngram_counts_serial(std::span<const PitchClassSequence> seqs,
                                       int order);

struct ScoreReport {
  std::vector<OriginalityScore> scores;  // sequence order, failures removed
  std::vector<CorpusIssue> issues;
};

// method must be AllNotes or Simonton; Ngram scoring has its own entry
// point below.
ScoreReport score_corpus(std::span<const PitchClassSequence> seqs,
                         const StochasticMatrix& matrix, Method method);
ScoreReport score_corpus_serial(std::span<const PitchClassSequence> seqs,
                                const StochasticMatrix& matrix, Method method);

ScoreReport score_corpus_ngram(std::span<const PitchClassSequence> seqs,
                               const NgramCounts& windows, const NgramCounts& prefixes,
                               int order);
ScoreReport score_corpus_ngram_serial(std::span<const PitchClassSequence> seqs,
                                      const NgramCounts& windows,
                                      const NgramCounts& prefixes, int order);

// Rescores each piece against the corpus matrix with that piece's own
// bigrams removed. corpus_counts must cover every sequence.
ScoreReport score_corpus_leave_one_out(std::span<const PitchClassSequence> seqs,
                                       const CountMatrix& corpus_counts, Method method);
ScoreReport score_corpus_leave_one_out_serial(std::span<const PitchClassSequence> seqs,
                                              const CountMatrix& corpus_counts,
                                              Method method);

}  // namespace melorig
