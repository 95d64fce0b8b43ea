#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "melorig/originality.hpp"

namespace melorig {

struct PieceRecord {
  std::string file_name;
  std::string title;
  std::string composer;
  std::optional<double> originality;        // in [0,1] when present
  std::optional<std::uint64_t> popularity;  // search result count

  bool operator==(const PieceRecord&) const = default;
};

inline constexpr const char* kDatasheetHeader =
    "File Name,Piece Title,Composer,Melodic Originality,Popularity";

// Requires the File Name, Piece Title and Composer columns; the two metric
// columns may be absent or empty. Extra columns are tolerated and ignored.
// Throws BadHeader on missing columns, IoError on malformed cells,
// duplicate file names, or originality outside [0,1].
std::vector<PieceRecord> read_datasheet(const std::filesystem::path& path);

// Exactly the five canonical columns; originality rendered with 4 decimals,
// popularity as a plain integer, missing values as empty cells.
void write_datasheet(std::span<const PieceRecord> records,
                     const std::filesystem::path& path);

// Rank,Title,Composer,Originality with 4-decimal values, rank from 1.
void write_ranked_table(std::span<const RankEntry> entries,
                        const std::filesystem::path& path);

}  // namespace melorig
