#include "psynorms/unicode.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "psynorms/error.hpp"

namespace psynorms::unicode {

bool is_valid_utf8(std::string_view utf8)
{
    const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
    const auto length = static_cast<int32_t>(utf8.size());
    int32_t i = 0;
    while (i < length) {
        UChar32 c;
        U8_NEXT(s, i, length, c);
        if (c < 0)
            return false;
    }
    return true;
}

std::size_t scalar_count(std::string_view utf8)
{
    const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
    const auto length = static_cast<int32_t>(utf8.size());
    int32_t i = 0;
    std::size_t n = 0;
    while (i < length) {
        UChar32 c;
        U8_NEXT(s, i, length, c);
        ++n;
    }
    return n;
}

bool contains_whitespace(std::string_view utf8)
{
    const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
    const auto length = static_cast<int32_t>(utf8.size());
    int32_t i = 0;
    while (i < length) {
        UChar32 c;
        U8_NEXT(s, i, length, c);
        if (c >= 0 && u_isUWhiteSpace(c))
            return true;
    }
    return false;
}

std::string normalize_word(std::string_view raw)
{
    if (!is_valid_utf8(raw))
        throw DataError("invalid UTF-8 in word");

    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status))
        throw DataError(std::string("ICU NFC unavailable: ") + u_errorName(status));

    icu::UnicodeString text = icu::UnicodeString::fromUTF8(icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
    text.trim();
    // Lowercasing can denormalize (e.g. some Greek forms), so normalize after it.
    text.toLower(icu::Locale::getRoot());
    icu::UnicodeString normalized = nfc->normalize(text, status);
    if (U_FAILURE(status))
        throw DataError(std::string("NFC normalization failed: ") + u_errorName(status));

    std::string out;
    normalized.toUTF8String(out);
    return out;
}

} // namespace psynorms::unicode
