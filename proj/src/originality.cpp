#include "melorig/originality.hpp"

#include <algorithm>

#include "melorig/errors.hpp"

namespace melorig {

const char* method_name(Method m) {
  switch (m) {
    case Method::AllNotes: return "all";
    case Method::Simonton: return "simonton";
    case Method::Ngram: return "ngram";
  }
  return "?";
}

namespace {

// Shared by the all-notes and first-five scorers so that a 6-note piece
// produces bit-identical values under both.
double one_minus_mean_transition_prob(std::span<const PitchClass> notes,
                                      std::size_t transition_count,
                                      const StochasticMatrix& ref) {
  double sum = 0.0;
  for (std::size_t i = 0; i < transition_count; ++i)
    sum += lookup(ref, notes[i], notes[i + 1]);
  return 1.0 - sum / static_cast<double>(transition_count);
}

}  // namespace

OriginalityScore originality_all_notes(const PitchClassSequence& seq,
                                       const StochasticMatrix& ref) {
  if (seq.notes.size() < 2)
    raise(Errc::TooShort, seq.piece_id + ": need at least 2 notes, have " +
                              std::to_string(seq.notes.size()));
  OriginalityScore s;
  s.piece_id = seq.piece_id;
  s.method = Method::AllNotes;
  s.window_count = seq.notes.size() - 1;
  s.value = one_minus_mean_transition_prob(seq.notes, s.window_count, ref);
  return s;
}

OriginalityScore originality_simonton(const PitchClassSequence& seq,
                                      const StochasticMatrix& ref) {
  if (seq.notes.size() < 6)
    raise(Errc::TooShort, seq.piece_id + ": need at least 6 notes, have " +
                              std::to_string(seq.notes.size()));
  OriginalityScore s;
  s.piece_id = seq.piece_id;
  s.method = Method::Simonton;
  s.window_count = 5;
  s.value = one_minus_mean_transition_prob(seq.notes, s.window_count, ref);
  return s;
}

OriginalityScore originality_ngram(const PitchClassSequence& seq,
                                   const NgramCounts& window_counts,
                                   const NgramCounts& prefix_counts, int order) {
  if (order < 3 || order > NgramCounts::kMaxOrder)
    raise(Errc::BadOrder,
          "n-gram scoring order must be in [3,8], got " + std::to_string(order));
  if (window_counts.order() != order || prefix_counts.order() != order - 1)
    raise(Errc::BadOrder, "n-gram tables do not match order " + std::to_string(order));
  std::size_t len = static_cast<std::size_t>(order);
  if (seq.notes.size() < len)
    raise(Errc::TooShort, seq.piece_id + ": need at least " + std::to_string(order) +
                              " notes, have " + std::to_string(seq.notes.size()));

  std::size_t windows = seq.notes.size() - len + 1;
  double sum = 0.0;
  for (std::size_t i = 0; i < windows; ++i) {
    std::span<const PitchClass> window(seq.notes.data() + i, len);
    std::uint64_t prefix = prefix_counts.count(window.first(len - 1));
    if (prefix == 0) continue;  // contributes probability 0
    std::uint64_t full = window_counts.count(window);
    sum += static_cast<double>(full) / static_cast<double>(prefix);
  }

  OriginalityScore s;
  s.piece_id = seq.piece_id;
  s.method = Method::Ngram;
  s.ngram_order = order;
  s.window_count = windows;
  s.value = 1.0 - sum / static_cast<double>(windows);
  return s;
}

std::vector<RankEntry> rank_pieces(std::span<const RankEntry> entries, std::size_t k) {
  std::vector<RankEntry> out(entries.begin(), entries.end());
  std::stable_sort(out.begin(), out.end(), [](const RankEntry& a, const RankEntry& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.title < b.title;
  });
  if (k < out.size()) out.resize(k);
  return out;
}

}  // namespace melorig
