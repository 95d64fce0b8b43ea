#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "melorig/csv.hpp"
#include "melorig/datasheet.hpp"
#include "melorig/midi.hpp"
#include "melorig/transitions.hpp"

namespace {

using melorig::NoteGroup;

struct Style {
  const char* composer;
  const char* slug;
  std::vector<int> steps;  // candidate intervals, sampled uniformly
};

// Four synthetic composers with distinct melodic habits so the pairwise
// tests and box plot have real separation to show.
const Style kStyles[] = {
    {"Albrecht", "albrecht", {0, 0, 0, 1, -1, 2, -2}},
    {"Bergmann", "bergmann", {1, -1, 2, -2, 1, -1, 3}},
    {"Cervenka", "cervenka", {3, -3, 4, -4, 5, -5, 7, -7}},
    {"Dahlberg", "dahlberg", {0}},  // unused, full random notes instead
};

const char* kTitleForms[] = {
    "Nocturne in %s, Op.%d, No.%d", "Mazurka in %s, Op.%d, No.%d",
    "Etude in %s, Op.%d, No.%d"};
const char* kKeys[] = {"C major",  "A minor",  "E-flat major", "F-sharp minor",
                       "G major",  "B minor",  "D-flat major", "C-sharp minor",
                       "F major",  "E minor",  "A-flat major", "B-flat minor"};

std::vector<std::uint8_t> make_notes(const Style& style, std::mt19937& rng,
                                     std::size_t count) {
  std::vector<std::uint8_t> notes;
  notes.reserve(count);
  if (style.steps.size() == 1) {  // Dahlberg, wide chromatic leaps
    std::uniform_int_distribution<int> note(40, 95);
    for (std::size_t i = 0; i < count; ++i)
      notes.push_back(static_cast<std::uint8_t>(note(rng)));
    return notes;
  }
  std::uniform_int_distribution<int> pick(0, static_cast<int>(style.steps.size()) - 1);
  int current = 60;
  for (std::size_t i = 0; i < count; ++i) {
    notes.push_back(static_cast<std::uint8_t>(current));
    current = std::clamp(current + style.steps[pick(rng)], 44, 88);
  }
  return notes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generate the bundled demo corpus"};
  std::string out = "data/demo";
  app.add_option("out", out, "output directory");
  CLI11_PARSE(app, argc, argv);

  namespace fs = std::filesystem;
  fs::path root(out);
  fs::create_directories(root / "corpus");

  std::mt19937 rng(42);
  std::uniform_int_distribution<int> length(80, 200);
  std::uniform_int_distribution<int> opus(9, 70);
  std::uniform_int_distribution<int> number(1, 12);
  std::uniform_int_distribution<std::uint64_t> popularity(10'000, 3'000'000);

  std::vector<melorig::PieceRecord> records;
  std::string pop_csv = "Title,Popularity\n";
  melorig::CountMatrix coverage;

  int piece_index = 0;
  for (const Style& style : kStyles) {
    for (int k = 0; k < 3; ++k, ++piece_index) {
      auto notes = make_notes(style, rng, static_cast<std::size_t>(length(rng)));

      std::vector<NoteGroup> groups;
      for (std::size_t i = 0; i < notes.size(); ++i) {
        NoteGroup g{{notes[i]}};
        if (piece_index == 3 && i % 4 == 0) {  // one piece carries chords
          g.notes.push_back(static_cast<std::uint8_t>(std::min(127, notes[i] + 4)));
          g.notes.push_back(static_cast<std::uint8_t>(std::min(127, notes[i] + 7)));
        }
        groups.push_back(std::move(g));
      }

      melorig::SmfWriteOptions opt;
      opt.format = piece_index < 6 ? 0 : 1;
      opt.track_count = opt.format == 1 ? static_cast<std::uint16_t>(2 + k % 2) : 1;
      opt.division = (piece_index % 3 == 0) ? 480 : (piece_index % 3 == 1 ? 384 : 960);
      opt.gap_ticks = opt.division;
      opt.velocity = static_cast<std::uint8_t>(56 + 8 * (piece_index % 5));
      opt.zero_velocity_note_off = piece_index == 7;
      opt.use_running_status = piece_index == 9;
      auto bytes = melorig::write_midi(groups, opt);

      char file_name[64];
      std::snprintf(file_name, sizeof file_name, "%s_%02d.mid", style.slug, k + 1);
      std::ofstream f(root / "corpus" / file_name, std::ios::binary);
      f.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
      f.close();

      char title[128];
      std::snprintf(title, sizeof title, kTitleForms[piece_index % 3],
                    kKeys[piece_index], opus(rng), number(rng));

      melorig::PieceRecord rec;
      rec.file_name = file_name;
      rec.title = title;
      rec.composer = style.composer;
      records.push_back(rec);
      pop_csv += melorig::csv::join({title, std::to_string(popularity(rng))});

      melorig::PitchClassSequence seq;
      for (std::uint8_t n : notes)
        seq.notes.push_back(melorig::PitchClass::from_midi_note(n));
      melorig::accumulate_transitions(coverage, seq);
    }
  }

  for (int r = 0; r < 12; ++r) {
    if (coverage.row_total(r) == 0) {
      std::fprintf(stderr, "row %d has no transitions, pick another seed\n", r);
      return 1;
    }
  }

  melorig::write_datasheet(records, root / "datasheet.csv");
  melorig::csv::write_text_file(root / "popularity.csv", pop_csv);
  melorig::csv::write_text_file(root / "config.txt",
                                "# demo corpus pipeline config\n"
                                "corpus_root = corpus\n"
                                "datasheet = datasheet.csv\n"
                                "out_dir = out\n"
                                "provider = static\n"
                                "popularity_csv = popularity.csv\n"
                                "method = all\n"
                                "top_k = 5\n");

  std::printf("wrote %zu pieces under %s\n", records.size(), root.string().c_str());
  return 0;
}
