#include "psynorms/textio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "psynorms/error.hpp"
#include "psynorms/unicode.hpp"

namespace psynorms::textio {

std::vector<Line> read_lines(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open file: " + path.string());

    std::vector<Line> lines;
    std::string text;
    std::size_t number = 0;
    while (std::getline(in, text)) {
        ++number;
        if (!text.empty() && text.back() == '\r')
            text.pop_back();
        if (number == 1 && text.starts_with("\xEF\xBB\xBF"))
            text.erase(0, 3);
        lines.push_back({number, std::move(text)});
    }
    if (in.bad())
        throw DataError("read error: " + path.string());
    return lines;
}

std::vector<std::string> split_record(std::string_view line, char sep)
{
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == sep) {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view field, double& out)
{
    field = trim(field);
    if (field.empty())
        return false;
    if (field.front() == '+')
        field.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    return ec == std::errc() && ptr == field.data() + field.size() && std::isfinite(out);
}

bool parse_int64(std::string_view field, long long& out)
{
    field = trim(field);
    if (field.empty())
        return false;
    if (field.front() == '+')
        field.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    return ec == std::errc() && ptr == field.data() + field.size();
}

std::unordered_set<std::string> load_word_set(const std::filesystem::path& path)
{
    std::unordered_set<std::string> words;
    for (const auto& line : read_lines(path)) {
        const auto text = trim(line.text);
        if (text.empty() || text.front() == '#')
            continue;
        try {
            words.insert(unicode::normalize_word(text));
        } catch (const DataError& e) {
            throw DataError(path.string(), line.number, e.what());
        }
    }
    return words;
}

std::string format_double(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace psynorms::textio
