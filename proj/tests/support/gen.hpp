#pragma once

// Shared helpers for the test binaries: deterministic random generators,
// a self-cleaning temp directory, and an error-code matcher.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "melorig/errors.hpp"
#include "melorig/midi.hpp"
#include "melorig/pitch.hpp"
#include "melorig/transitions.hpp"

namespace testsup {

// True when fn() throws a melorig::Error carrying exactly `code`.
template <typename Fn>
bool raises(melorig::Errc code, Fn&& fn) {
  try {
    std::forward<Fn>(fn)();
  } catch (const melorig::Error& err) {
    return err.code() == code;
  } catch (...) {
    return false;
  }
  return false;
}

struct TempDir {
  std::filesystem::path path;

  TempDir() {
    static std::atomic<std::uint64_t> counter{0};
    std::random_device rd;
    path = std::filesystem::temp_directory_path() /
           ("melorig_test_" + std::to_string(rd()) + "_" +
            std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path file(const std::string& name) const { return path / name; }
};

inline std::vector<melorig::PitchClass> random_pcs(std::mt19937& rng, std::size_t len) {
  std::uniform_int_distribution<int> pc(0, 11);
  std::vector<melorig::PitchClass> notes;
  notes.reserve(len);
  for (std::size_t i = 0; i < len; ++i) notes.emplace_back(pc(rng));
  return notes;
}

inline melorig::PitchClassSequence random_sequence(std::mt19937& rng, std::size_t len,
                                                   std::string id = "piece") {
  melorig::PitchClassSequence seq;
  seq.piece_id = std::move(id);
  seq.notes = random_pcs(rng, len);
  return seq;
}

// Counts with every row populated, so normalize() defines all rows.
inline melorig::CountMatrix random_count_matrix(std::mt19937& rng,
                                                std::uint64_t max_cell = 500) {
  std::uniform_int_distribution<std::uint64_t> cell(0, max_cell);
  melorig::CountMatrix m;
  for (std::size_t r = 0; r < melorig::PitchClass::kCount; ++r) {
    std::uint64_t row_total = 0;
    for (std::size_t c = 0; c < melorig::PitchClass::kCount; ++c) {
      m.counts[r][c] = cell(rng);
      row_total += m.counts[r][c];
    }
    if (row_total == 0) {
      m.counts[r][r] = 1;
      row_total = 1;
    }
    m.total_bigrams += row_total;
  }
  return m;
}

inline melorig::StochasticMatrix random_stochastic(std::mt19937& rng) {
  return melorig::normalize(random_count_matrix(rng));
}

// Note groups for SMF round trips: mostly single notes, some chords.
inline std::vector<melorig::NoteGroup> random_note_groups(std::mt19937& rng,
                                                          std::size_t len,
                                                          double chord_prob = 0.2) {
  std::uniform_int_distribution<int> note(0, 127);
  std::uniform_int_distribution<int> extra(1, 3);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<melorig::NoteGroup> groups(len);
  for (auto& g : groups) {
    g.notes.push_back(static_cast<std::uint8_t>(note(rng)));
    if (coin(rng) < chord_prob) {
      int n = extra(rng);
      for (int i = 0; i < n; ++i) g.notes.push_back(static_cast<std::uint8_t>(note(rng)));
    }
  }
  return groups;
}

// The pitch-class stream a parsed file should yield: groups in order, notes
// within a group ascending (the extraction tie-break).
inline std::vector<melorig::PitchClass> expected_pitches(
    const std::vector<melorig::NoteGroup>& groups) {
  std::vector<melorig::PitchClass> out;
  for (const auto& g : groups) {
    std::vector<std::uint8_t> notes = g.notes;
    std::sort(notes.begin(), notes.end());
    for (std::uint8_t n : notes) out.push_back(melorig::PitchClass::from_midi_note(n));
  }
  return out;
}

}  // namespace testsup
