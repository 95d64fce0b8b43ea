#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace melorig::csv {

using Row = std::vector<std::string>;

// RFC 4180 style: fields containing comma, quote, CR or LF are quoted and
// embedded quotes doubled. Everything is treated as opaque UTF-8 bytes.
std::string escape(std::string_view field);
// One complete LF-terminated line.
std::string join(const Row& row);

// Accepts LF and CRLF line endings, quoted fields may span lines.
std::vector<Row> parse(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);
std::vector<Row> read_file(const std::filesystem::path& path);

}  // namespace melorig::csv
