#include "melorig/midi.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include "melorig/errors.hpp"

namespace melorig {

namespace {

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  bool eof() const { return pos_ >= bytes_.size(); }

  std::uint8_t u8() {
    need(1);
    return bytes_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_] << 8 | bytes_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = v << 8 | bytes_[pos_ + i];
    pos_ += 4;
    return v;
  }
  void skip(std::size_t n) {
    need(n);
    pos_ += n;
  }

  // SMF variable-length quantity: 7 bits per byte, MSB is the continuation
  // flag, at most 4 bytes.
  std::uint32_t varlen() {
    std::uint32_t value = 0;
    for (int i = 0; i < 4; ++i) {
      std::uint8_t b = u8();
      value = value << 7 | (b & 0x7F);
      if ((b & 0x80) == 0) return value;
    }
    raise(Errc::InvalidVarLen, "variable-length quantity exceeds 4 bytes");
  }

 private:
  void need(std::size_t n) {
    if (remaining() < n) raise(Errc::TruncatedChunk, "unexpected end of data");
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

MidiTrack parse_track(ByteReader& chunk) {
  MidiTrack track;
  std::uint64_t tick = 0;
  std::uint8_t running_status = 0;

  while (!chunk.eof()) {
    tick += chunk.varlen();
    std::uint8_t first = chunk.u8();
    std::uint8_t status;
    std::uint8_t data0 = 0;
    if (first & 0x80) {
      status = first;
      if (status < 0xF0) data0 = chunk.u8();
    } else {
      if (running_status == 0)
        raise(Errc::TruncatedChunk, "data byte with no running status");
      status = running_status;
      data0 = first;
    }

    if (status < 0xF0) {
      running_status = status;
      std::uint8_t kind = status & 0xF0;
      std::uint8_t channel = status & 0x0F;
      bool two_data_bytes = kind != 0xC0 && kind != 0xD0;
      std::uint8_t data1 = two_data_bytes ? chunk.u8() : 0;
      if ((data0 & 0x80) || (data1 & 0x80))
        raise(Errc::TruncatedChunk, "data byte with high bit set");
      if (kind == 0x90 && data1 > 0) {
        // track_index is stamped by the caller once the track's slot is known
        track.notes.push_back({tick, 0, channel, data0, data1});
      }
      // note-offs (0x80) and note-ons with velocity 0 are consumed silently
    } else if (status == 0xFF) {
      // meta event; cancels running status per the SMF spec
      running_status = 0;
      std::uint8_t type = chunk.u8();
      std::uint32_t length = chunk.varlen();
      chunk.skip(length);
      if (type == 0x2F) break;  // end of track; any padding is the caller's to skip
    } else if (status == 0xF0 || status == 0xF7) {
      running_status = 0;
      std::uint32_t length = chunk.varlen();
      chunk.skip(length);
    } else {
      raise(Errc::TruncatedChunk, "unexpected status byte in track data");
    }
  }
  return track;
}

}  // namespace

MidiDocument parse_midi(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) raise(Errc::TruncatedChunk, "file shorter than a chunk header");
  if (std::memcmp(bytes.data(), "MThd", 4) != 0)
    raise(Errc::BadMagic, "header chunk is not MThd");

  ByteReader in(bytes);
  in.skip(4);
  std::uint32_t header_length = in.u32();
  if (header_length < 6) raise(Errc::TruncatedChunk, "MThd chunk shorter than 6 bytes");
  if (in.remaining() < header_length) raise(Errc::TruncatedChunk, "MThd chunk truncated");

  MidiDocument doc;
  doc.format = in.u16();
  std::uint16_t declared_tracks = in.u16();
  doc.division = static_cast<std::int16_t>(in.u16());
  in.skip(header_length - 6);

  if (doc.format != 0 && doc.format != 1)
    raise(Errc::UnsupportedFormat,
          "SMF format " + std::to_string(doc.format) + " (only 0 and 1 are supported)");

  while (!in.eof()) {
    if (in.remaining() < 8) raise(Errc::TruncatedChunk, "trailing bytes too short for a chunk");
    char magic[4];
    for (char& c : magic) c = static_cast<char>(in.u8());
    std::uint32_t length = in.u32();
    if (in.remaining() < length) raise(Errc::TruncatedChunk, "chunk length exceeds file size");
    if (std::memcmp(magic, "MTrk", 4) != 0) {
      in.skip(length);  // alien chunk types are skipped per the SMF spec
      continue;
    }
    ByteReader chunk(bytes.subspan(in.pos(), length));
    MidiTrack track = parse_track(chunk);
    for (auto& note : track.notes) note.track_index = static_cast<std::uint16_t>(doc.tracks.size());
    doc.tracks.push_back(std::move(track));
    in.skip(length);
  }

  if (doc.tracks.size() < declared_tracks)
    raise(Errc::TruncatedChunk, "file ends before all declared tracks were read");
  return doc;
}

MidiDocument parse_midi_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) raise(Errc::IoError, "read failed for " + path.string());
  return parse_midi(bytes);
}

PitchClassSequence extract_sequence(const MidiDocument& doc, const ExtractionConfig& config,
                                    std::string piece_id) {
  std::vector<TimedNoteEvent> merged;
  for (const auto& track : doc.tracks) {
    for (const auto& note : track.notes) {
      if (config.exclude_percussion && note.channel == 9) continue;
      merged.push_back(note);
    }
  }
  std::sort(merged.begin(), merged.end(), [](const TimedNoteEvent& a, const TimedNoteEvent& b) {
    return std::tie(a.tick, a.track_index, a.channel, a.note_number) <
           std::tie(b.tick, b.track_index, b.channel, b.note_number);
  });
  if (merged.empty()) raise(Errc::EmptyPiece, "no note onsets in " + piece_id);

  PitchClassSequence seq;
  seq.piece_id = std::move(piece_id);
  seq.notes.reserve(merged.size());
  for (const auto& note : merged) seq.notes.push_back(PitchClass::from_midi_note(note.note_number));
  return seq;
}

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_varlen(std::vector<std::uint8_t>& out, std::uint32_t v) {
  std::uint8_t stack[4];
  int n = 0;
  stack[n++] = v & 0x7F;
  while ((v >>= 7) != 0) stack[n++] = (v & 0x7F) | 0x80;
  while (n-- > 0) out.push_back(stack[n]);
}

struct TrackWriter {
  std::vector<std::uint8_t> data;
  std::uint64_t last_tick = 0;
  std::uint8_t last_status = 0;

  void event(std::uint64_t tick, std::uint8_t status, std::uint8_t d0, std::uint8_t d1,
             bool running_status) {
    put_varlen(data, static_cast<std::uint32_t>(tick - last_tick));
    last_tick = tick;
    if (!running_status || status != last_status) {
      data.push_back(status);
      last_status = status;
    }
    data.push_back(d0);
    data.push_back(d1);
  }

  void finish(std::vector<std::uint8_t>& out) {
    put_varlen(data, 0);
    data.push_back(0xFF);
    data.push_back(0x2F);
    data.push_back(0x00);
    out.insert(out.end(), {'M', 'T', 'r', 'k'});
    put_u32(out, static_cast<std::uint32_t>(data.size()));
    out.insert(out.end(), data.begin(), data.end());
  }
};

}  // namespace

std::vector<std::uint8_t> write_midi(std::span<const NoteGroup> groups,
                                     const SmfWriteOptions& options) {
  int track_count = options.format == 0 ? 1 : std::max(1, options.track_count);
  std::vector<TrackWriter> tracks(static_cast<std::size_t>(track_count));

  std::uint8_t on = static_cast<std::uint8_t>(0x90 | (options.channel & 0x0F));
  std::uint8_t off = static_cast<std::uint8_t>(0x80 | (options.channel & 0x0F));
  int gap = std::max(1, options.gap_ticks);

  for (std::size_t g = 0; g < groups.size(); ++g) {
    auto& track = tracks[g % tracks.size()];
    std::uint64_t tick = static_cast<std::uint64_t>(g) * static_cast<std::uint64_t>(gap);
    std::vector<std::uint8_t> notes = groups[g].notes;
    std::sort(notes.begin(), notes.end());
    for (std::uint8_t note : notes)
      track.event(tick, on, note, options.velocity, options.use_running_status);
    std::uint64_t off_tick = tick + static_cast<std::uint64_t>(gap) / 2;
    for (std::uint8_t note : notes) {
      if (options.zero_velocity_note_off)
        track.event(off_tick, on, note, 0, options.use_running_status);
      else
        track.event(off_tick, off, note, 64, options.use_running_status);
    }
  }

  std::vector<std::uint8_t> out;
  out.insert(out.end(), {'M', 'T', 'h', 'd'});
  put_u32(out, 6);
  put_u16(out, static_cast<std::uint16_t>(options.format));
  put_u16(out, static_cast<std::uint16_t>(tracks.size()));
  put_u16(out, static_cast<std::uint16_t>(options.division));
  for (auto& track : tracks) track.finish(out);
  return out;
}

}  // namespace melorig
