#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <unordered_map>
#include <vector>

#include "melorig/pitch.hpp"

namespace melorig {

// 12x12 two-note transition counts, read row (from) to column (to).
struct CountMatrix {
  std::array<std::array<std::uint64_t, PitchClass::kCount>, PitchClass::kCount> counts{};
  std::uint64_t total_bigrams = 0;

  std::uint64_t row_total(int row) const {
    std::uint64_t sum = 0;
    for (std::uint64_t c : counts[static_cast<std::size_t>(row)]) sum += c;
    return sum;
  }

  bool operator==(const CountMatrix&) const = default;
};

CountMatrix count_transitions(const PitchClassSequence& seq);
void accumulate_transitions(CountMatrix& into, const PitchClassSequence& seq);
CountMatrix merge_counts(const CountMatrix& a, const CountMatrix& b);
// Entrywise a - b; every entry of b must not exceed a's (used for
// leave-one-out rescoring).
CountMatrix subtract_counts(const CountMatrix& a, const CountMatrix& b);

// Row-stochastic probabilities. Rows whose count total is zero are not
// zero-filled; they are marked undefined and consumers decide.
struct StochasticMatrix {
  std::array<std::array<double, PitchClass::kCount>, PitchClass::kCount> probs{};
  std::array<bool, PitchClass::kCount> row_defined{};

  bool all_rows_defined() const {
    for (bool d : row_defined)
      if (!d) return false;
    return true;
  }
};

StochasticMatrix normalize(const CountMatrix& counts);
// Throws UndefinedRow when `from` has no observations in the backing corpus.
double lookup(const StochasticMatrix& m, PitchClass from, PitchClass to);

// Sparse n-gram counts over pitch classes, order 2..8. Dense storage is out
// of the question at order 8 (12^8 cells), so keys are packed 4 bits per
// pitch class into a uint32.
class NgramCounts {
 public:
  static constexpr int kMinOrder = 2;
  static constexpr int kMaxOrder = 8;

  explicit NgramCounts(int order);

  int order() const { return order_; }
  std::uint64_t total_windows() const { return total_; }
  std::size_t distinct() const { return counts_.size(); }

  void add(std::span<const PitchClass> key, std::uint64_t n = 1);
  std::uint64_t count(std::span<const PitchClass> key) const;  // 0 when unseen

  std::uint32_t pack(std::span<const PitchClass> key) const;
  std::vector<PitchClass> unpack(std::uint32_t packed) const;

  const std::unordered_map<std::uint32_t, std::uint64_t>& raw() const { return counts_; }

 private:
  int order_;
  std::uint64_t total_ = 0;
  std::unordered_map<std::uint32_t, std::uint64_t> counts_;
};

// One increment per contiguous window of length `order`.
NgramCounts count_ngrams(const PitchClassSequence& seq, int order);
void merge_ngrams(NgramCounts& into, const NgramCounts& more);

// CSV with row/column labels C..B. Probabilities are written at full
// precision; undefined rows round-trip as empty cells.
void write_count_matrix_csv(const CountMatrix& m, const std::filesystem::path& path);
CountMatrix read_count_matrix_csv(const std::filesystem::path& path);
void write_stochastic_matrix_csv(const StochasticMatrix& m, const std::filesystem::path& path);
StochasticMatrix read_stochastic_matrix_csv(const std::filesystem::path& path);

}  // namespace melorig
