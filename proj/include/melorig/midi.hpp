#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "melorig/pitch.hpp"

namespace melorig {

// One retained note onset (note-on with velocity > 0), timed in absolute ticks.
struct TimedNoteEvent {
  std::uint64_t tick = 0;
  std::uint16_t track_index = 0;
  std::uint8_t channel = 0;
  std::uint8_t note_number = 0;
  std::uint8_t velocity = 0;

  bool operator==(const TimedNoteEvent&) const = default;
};

struct MidiTrack {
  std::vector<TimedNoteEvent> notes;
};

struct MidiDocument {
  int format = 0;     // 0 or 1; format 2 is rejected at parse time
  int division = 0;   // raw division word (negative = SMPTE); unused downstream
  std::vector<MidiTrack> tracks;
};

// Parses SMF format 0/1: big-endian chunk lengths, variable-length deltas,
// running status. Meta and sysex events are consumed but not retained;
// unknown chunk types are skipped. Note-offs and note-ons with velocity 0
// leave no trace in the document.
MidiDocument parse_midi(std::span<const std::uint8_t> bytes);
MidiDocument parse_midi_file(const std::filesystem::path& path);

struct ExtractionConfig {
  bool exclude_percussion = false;  // drop channel 9 (0-indexed)
};

// Merges all tracks into one stream ordered by (tick, track, channel, note
// number) and maps note numbers to pitch classes. Throws EmptyPiece when no
// notes remain.
PitchClassSequence extract_sequence(const MidiDocument& doc, const ExtractionConfig& config = {},
                                    std::string piece_id = {});

// ---- SMF encoding (fixture generation, demo corpora) -----------------------

// Notes sharing one onset tick. Written in ascending note order so the
// decoded stream matches the extraction tie-break.
struct NoteGroup {
  std::vector<std::uint8_t> notes;
};

struct SmfWriteOptions {
  int format = 0;       // 0 or 1
  int track_count = 1;  // format 1 only: groups are distributed round-robin
  int division = 480;
  int gap_ticks = 480;  // onset spacing between successive groups
  std::uint8_t channel = 0;
  std::uint8_t velocity = 64;
  bool zero_velocity_note_off = false;  // note-on velocity 0 instead of 0x80
  bool use_running_status = false;
};

std::vector<std::uint8_t> write_midi(std::span<const NoteGroup> groups,
                                     const SmfWriteOptions& options = {});

inline std::vector<NoteGroup> monophonic_groups(std::span<const PitchClass> notes, int octave_base = 60) {
  std::vector<NoteGroup> groups;
  groups.reserve(notes.size());
  for (PitchClass pc : notes) {
    groups.push_back({{static_cast<std::uint8_t>(octave_base + pc.value())}});
  }
  return groups;
}

}  // namespace melorig
