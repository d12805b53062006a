#pragma once

// Line-oriented readers shared by the file loaders.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace psynorms::textio {

struct Line {
    std::size_t number; // 1-based
    std::string text;   // without the trailing CR/LF
};

/// Reads every line of a UTF-8 text file, dropping a leading BOM.
/// Throws DataError if the file cannot be opened.
std::vector<Line> read_lines(const std::filesystem::path& path);

/// Splits one CSV record on `sep`. Double-quoted fields may contain the separator
/// and escaped quotes ("").
std::vector<std::string> split_record(std::string_view line, char sep = ',');

std::string_view trim(std::string_view s);

/// Strict decimal parse of the whole field (period decimal separator only).
bool parse_double(std::string_view field, double& out);
bool parse_int64(std::string_view field, long long& out);

/// Plain word list: one word per line, blank lines and '#' comments skipped,
/// words normalized.
std::unordered_set<std::string> load_word_set(const std::filesystem::path& path);

/// Formats a double with the shortest representation that round-trips.
std::string format_double(double v);

} // namespace psynorms::textio
