#pragma once

// Small CSV and number formatting helpers shared by the readers and writers.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gazeheat::text {

// Reads a whole file; throws a Data error naming the path when it cannot be opened.
std::string read_file(const std::string& path);

// Writes a whole file, creating nothing but the file itself.
void write_file(const std::string& path, std::string_view contents);

// Splits into lines, accepting LF or CRLF. A trailing empty line is dropped.
std::vector<std::string_view> split_lines(std::string_view contents);

// Splits one CSV row on commas; surrounding whitespace and double quotes are stripped.
std::vector<std::string_view> split_fields(std::string_view line);

// Parses a decimal number. Accepts "nan"/"inf" spellings, returns nullopt on garbage.
std::optional<double> parse_double(std::string_view field);

// Shortest representation that round-trips exactly.
std::string format_double(double value);

}  // namespace gazeheat::text
