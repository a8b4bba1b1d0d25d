#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace geoglove::io {

/// Writes `content` to a sibling temp file and renames it over `path`, so a
/// reader never observes a partially written file.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// Lines without their terminators; a trailing '\r' is stripped.
std::vector<std::string> split_lines(std::string_view text);

/// `%.17g`: exact round-trip for doubles.
std::string format_full(double v);
/// Shortest representation that round-trips.
std::string format_shortest(double v);
/// Fixed-point with `decimals` digits after the point.
std::string format_fixed(double v, int decimals);

/// Strict double parse of the whole field; false on trailing garbage.
bool parse_double(std::string_view s, double& out);
bool parse_int(std::string_view s, long long& out);

std::string_view trim(std::string_view s);

/// RFC 4180-style CSV: comma separated, double-quoted fields with `""` escapes.
/// Quoted fields may not span lines.
std::vector<std::string> parse_csv_row(std::string_view line, std::size_t line_no);
std::string csv_field(std::string_view s);

/// Reads a one-word-per-line list, skipping blank lines and `#` comments.
std::vector<std::string> read_word_list(const std::filesystem::path& path);

}  // namespace geoglove::io
