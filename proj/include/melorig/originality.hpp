#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "melorig/pitch.hpp"
#include "melorig/transitions.hpp"

namespace melorig {

enum class Method { AllNotes, Simonton, Ngram };

const char* method_name(Method m);

struct OriginalityScore {
  std::string piece_id;
  Method method = Method::AllNotes;
  int ngram_order = 0;  // 0 unless method == Ngram
  double value = 0.0;
  std::size_t window_count = 0;  // transitions (or windows) averaged
};

// 1 - mean transition probability over all n-1 consecutive note pairs.
// Throws TooShort below 2 notes, UndefinedRow when the reference matrix has
// no data for some starting pitch class.
OriginalityScore originality_all_notes(const PitchClassSequence& seq,
                                       const StochasticMatrix& ref);

// Same formula restricted to the first 5 transitions (first 6 notes).
// Throws TooShort below 6 notes.
OriginalityScore originality_simonton(const PitchClassSequence& seq,
                                      const StochasticMatrix& ref);

// Generalization to order-n windows, order 3..8: P(window) = count(window)
// / count(prefix) from the reference n-gram tables; a zero prefix count
// contributes probability 0. Throws TooShort when the piece has no full
// window, BadOrder when order is out of range or the tables disagree.
OriginalityScore originality_ngram(const PitchClassSequence& seq,
                                   const NgramCounts& window_counts,
                                   const NgramCounts& prefix_counts, int order);

struct RankEntry {
  std::string title;
  std::string composer;
  double value = 0.0;

  bool operator==(const RankEntry&) const = default;
};

// Descending by value, ties broken by title ascending. k greater than the
// input size returns everything.
std::vector<RankEntry> rank_pieces(std::span<const RankEntry> entries, std::size_t k);

}  // namespace melorig
