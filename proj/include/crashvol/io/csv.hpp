#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace crashvol::io {

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

/// Splits one CSV record on commas and trims surrounding whitespace from
/// each field. Quoting is not supported; none of our formats need it.
std::vector<std::string> split_csv_line(std::string_view line);

/// Splits text into lines, dropping a trailing '\r' and blank lines are kept.
std::vector<std::string_view> split_lines(std::string_view text);

std::string_view trim(std::string_view s) noexcept;

// Strict numeric parsing: the whole field must be consumed. Throws
// Error(Parse) mentioning `what` on failure.
double parse_double(std::string_view field, std::string_view what);
long long parse_integer(std::string_view field, std::string_view what);

/// Shortest representation that round-trips to the same double.
std::string format_roundtrip(double value);

/// Fixed number of significant digits (printf %.Ng).
std::string format_significant(double value, int digits);

/// Parses a comma-separated list of doubles ("5,25,75,95").
std::vector<double> parse_double_list(std::string_view text, std::string_view what);

}  // namespace crashvol::io
