#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dfd::csv {

struct Row {
    std::vector<std::string> cells;
    std::size_t line = 0;  // 1-based line number in the source file
};

// Reads a CSV file. Lines starting with '#' are comments and skipped;
// trailing '\r' is stripped; cells are trimmed of surrounding whitespace.
std::vector<Row> read_file(const std::filesystem::path& path);

std::vector<std::string> split_line(const std::string& line);

// Missing-value markers: empty cell, NA, n/a, null (case-insensitive).
bool is_missing_marker(const std::string& cell);

// Parses a cell as double; returns nullopt for missing markers and
// unparseable content.
std::optional<double> parse_cell(const std::string& cell);

// Round-trip-exact double formatting (%.17g, trimmed).
std::string format_double(double v);

void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace dfd::csv
