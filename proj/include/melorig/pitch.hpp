#pragma once

#include <array>
#include <cassert>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace melorig {

inline constexpr std::array<const char*, 12> kPitchClassNames = {
    "C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B"};

// A pitch class: note identity modulo octave, 0 = C through 11 = B.
class PitchClass {
 public:
  static constexpr int kCount = 12;

  constexpr PitchClass() = default;
  constexpr explicit PitchClass(int value) : value_(static_cast<std::uint8_t>(value)) {
    assert(value >= 0 && value < kCount);
  }

  // Total on any note number, period 12. MIDI 60 (middle C) maps to C.
  static constexpr PitchClass from_midi_note(int note) {
    return PitchClass(((note % kCount) + kCount) % kCount);
  }

  constexpr int value() const { return value_; }
  constexpr const char* name() const { return kPitchClassNames[value_]; }

  friend constexpr auto operator<=>(PitchClass, PitchClass) = default;

 private:
  std::uint8_t value_ = 0;
};

inline std::optional<PitchClass> pitch_class_from_name(std::string_view name) {
  for (int i = 0; i < PitchClass::kCount; ++i) {
    if (name == kPitchClassNames[i]) return PitchClass(i);
  }
  return std::nullopt;
}

// The unit of analysis: the ordered pitch classes of one piece.
struct PitchClassSequence {
  std::string piece_id;
  std::vector<PitchClass> notes;

  std::size_t note_count() const { return notes.size(); }

  bool operator==(const PitchClassSequence&) const = default;
};

}  // namespace melorig
