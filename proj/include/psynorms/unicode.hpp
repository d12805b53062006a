#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace psynorms::unicode {

/// NFC-normalizes, lowercases and trims surrounding whitespace.
/// Invalid UTF-8 is reported as a DataError.
std::string normalize_word(std::string_view raw);

/// Number of Unicode scalar values in a UTF-8 string.
std::size_t scalar_count(std::string_view utf8);

/// True if the string contains any whitespace code point.
bool contains_whitespace(std::string_view utf8);

bool is_valid_utf8(std::string_view utf8);

} // namespace psynorms::unicode
