#include "melorig/datasheet.hpp"

#include <cstdio>
#include <cstdlib>
#include <unordered_set>

#include "melorig/csv.hpp"
#include "melorig/errors.hpp"

namespace melorig {

namespace {

std::string four_decimals(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::size_t find_column(const csv::Row& header, const std::string& name,
                        const std::filesystem::path& path, bool required) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  if (required)
    raise(Errc::BadHeader, path.string() + ": missing column '" + name + "'");
  return static_cast<std::size_t>(-1);
}

std::string cell(const csv::Row& row, std::size_t idx) {
  return idx < row.size() ? row[idx] : std::string();
}

}  // namespace

std::vector<PieceRecord> read_datasheet(const std::filesystem::path& path) {
  auto rows = csv::parse(csv::read_text_file(path));
  if (rows.empty()) raise(Errc::BadHeader, path.string() + ": empty datasheet");
  const csv::Row& header = rows[0];
  std::size_t c_file = find_column(header, "File Name", path, true);
  std::size_t c_title = find_column(header, "Piece Title", path, true);
  std::size_t c_composer = find_column(header, "Composer", path, true);
  std::size_t c_orig = find_column(header, "Melodic Originality", path, false);
  std::size_t c_pop = find_column(header, "Popularity", path, false);

  std::vector<PieceRecord> records;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const csv::Row& row = rows[i];
    PieceRecord rec;
    rec.file_name = cell(row, c_file);
    rec.title = cell(row, c_title);
    rec.composer = cell(row, c_composer);
    if (rec.file_name.empty())
      raise(Errc::IoError, path.string() + ": row " + std::to_string(i + 1) +
                               " has an empty file name");
    if (!seen.insert(rec.file_name).second)
      raise(Errc::IoError,
            path.string() + ": duplicate file name '" + rec.file_name + "'");

    std::string orig = cell(row, c_orig);
    if (!orig.empty()) {
      char* end = nullptr;
      double v = std::strtod(orig.c_str(), &end);
      if (end != orig.c_str() + orig.size())
        raise(Errc::IoError, path.string() + ": bad originality '" + orig + "'");
      if (v < 0.0 || v > 1.0)
        raise(Errc::IoError,
              path.string() + ": originality out of [0,1]: " + orig);
      rec.originality = v;
    }
    std::string pop = cell(row, c_pop);
    if (!pop.empty()) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(pop.c_str(), &end, 10);
      if (end != pop.c_str() + pop.size() || pop[0] == '-')
        raise(Errc::IoError, path.string() + ": bad popularity '" + pop + "'");
      rec.popularity = v;
    }
    records.push_back(std::move(rec));
  }
  return records;
}

void write_datasheet(std::span<const PieceRecord> records,
                     const std::filesystem::path& path) {
  std::string text = kDatasheetHeader;
  text += '\n';
  for (const PieceRecord& rec : records) {
    csv::Row row{rec.file_name, rec.title, rec.composer,
                 rec.originality ? four_decimals(*rec.originality) : std::string(),
                 rec.popularity ? std::to_string(*rec.popularity) : std::string()};
    text += csv::join(row);
  }
  csv::write_text_file(path, text);
}

void write_ranked_table(std::span<const RankEntry> entries,
                        const std::filesystem::path& path) {
  std::string text = "Rank,Title,Composer,Originality\n";
  std::size_t rank = 1;
  for (const RankEntry& e : entries) {
    csv::Row row{std::to_string(rank++), e.title, e.composer, four_decimals(e.value)};
    text += csv::join(row);
  }
  csv::write_text_file(path, text);
}

}  // namespace melorig
