#include "psynorms/lexicon.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "psynorms/error.hpp"
#include "psynorms/textio.hpp"
#include "psynorms/unicode.hpp"

namespace psynorms {

std::string_view pos_id(PartOfSpeech p)
{
    switch (p) {
    case PartOfSpeech::Noun: return "noun";
    case PartOfSpeech::Verb: return "verb";
    case PartOfSpeech::Adjective: return "adjective";
    case PartOfSpeech::Adverb: return "adverb";
    case PartOfSpeech::Other: return "other";
    }
    return "other";
}

PartOfSpeech parse_pos(std::string_view tag)
{
    std::string t;
    try {
        t = unicode::normalize_word(tag);
    } catch (const DataError&) {
        return PartOfSpeech::Other;
    }
    if (!t.empty() && t.back() == '.')
        t.pop_back();
    if (t == "noun" || t == "n" || t == "s" || t == "subst" || t == "substantivo" || t == "sm" || t == "sf")
        return PartOfSpeech::Noun;
    if (t == "verb" || t == "v" || t == "verbo")
        return PartOfSpeech::Verb;
    if (t == "adjective" || t == "adj" || t == "adjetivo")
        return PartOfSpeech::Adjective;
    if (t == "adverb" || t == "adv" || t == "advérbio" || t == "adverbio")
        return PartOfSpeech::Adverb;
    return PartOfSpeech::Other;
}

std::vector<DictionaryEntry> load_dictionary(const std::filesystem::path& path)
{
    const auto lines = textio::read_lines(path);
    const std::string file = path.string();
    std::vector<DictionaryEntry> entries;
    std::unordered_set<std::string> seen;
    bool header_seen = false;
    for (const auto& line : lines) {
        if (textio::trim(line.text).empty())
            continue;
        const auto fields = textio::split_record(line.text);
        if (!header_seen) {
            header_seen = true;
            if (fields.size() == 2 && textio::trim(fields[0]) == "word" && textio::trim(fields[1]) == "pos")
                continue;
            throw DataError(file, line.number, "expected header 'word,pos'");
        }
        if (fields.size() != 2)
            throw DataError(file, line.number, "expected 2 fields (word,pos)");
        std::string word;
        try {
            word = unicode::normalize_word(fields[0]);
        } catch (const DataError& e) {
            throw DataError(file, line.number, e.what());
        }
        if (word.empty() || unicode::contains_whitespace(word))
            throw DataError(file, line.number, "invalid word '" + fields[0] + "'");
        if (!seen.insert(word).second)
            continue;
        entries.push_back({std::move(word), parse_pos(fields[1])});
    }
    return entries;
}

LexiconBuild build_lexicon(const std::vector<DictionaryEntry>& entries, const std::unordered_set<std::string>& loanwords,
                           const FrequencyList& freq, std::uint64_t min_count,
                           const std::map<PropertyKind, MultiViewModel>& models, const FeatureResources& resources)
{
    const LikertScale seven(1.0, 7.0);
    for (auto p : kAllProperties) {
        auto it = models.find(p);
        if (it == models.end())
            throw DataError("no model for property " + std::string(property_id(p)));
        if (it->second.property != p)
            throw DataError("model registered for " + std::string(property_id(p)) + " predicts " +
                            std::string(property_id(it->second.property)));
        if (!(it->second.scale == seven))
            throw DataError("model for " + std::string(property_id(p)) + " is not on the 1-7 scale");
    }

    LexiconBuild build;
    std::unordered_set<std::string> seen;
    for (const auto& e : entries) {
        if (e.pos == PartOfSpeech::Other || loanwords.contains(e.word) || !seen.insert(e.word).second)
            continue;
        const auto count = freq.count(e.word);
        if (count < min_count)
            continue;
        LexiconEntry out{e.word, e.pos, count, {}};
        for (auto p : kAllProperties)
            out.ratings[static_cast<std::size_t>(p)] = predict_multiview(models.at(p), e.word, resources, true);
        build.entries.push_back(std::move(out));
    }
    // std::string compares bytes as unsigned char; for UTF-8 that is code point order.
    std::sort(build.entries.begin(), build.entries.end(),
              [](const LexiconEntry& a, const LexiconEntry& b) { return a.word < b.word; });
    for (const auto& e : build.entries)
        ++build.pos_counts[e.pos];
    return build;
}

void write_lexicon(const std::vector<LexiconEntry>& lexicon, const std::filesystem::path& path)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write file: " + path.string());
    out << kLexiconHeader << '\n';
    char buf[32];
    for (const auto& e : lexicon) {
        out << e.word << ',' << pos_id(e.pos) << ',' << e.corpus_count;
        for (double r : e.ratings) {
            std::snprintf(buf, sizeof buf, "%.3f", r);
            out << ',' << buf;
        }
        out << '\n';
    }
    if (!out)
        throw DataError("write failed: " + path.string());
}

std::vector<LexiconEntry> read_lexicon(const std::filesystem::path& path)
{
    const auto lines = textio::read_lines(path);
    const std::string file = path.string();
    if (lines.empty() || lines.front().text != kLexiconHeader)
        throw DataError(file, 1, "expected header '" + std::string(kLexiconHeader) + "'");

    std::vector<LexiconEntry> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& line = lines[i];
        if (textio::trim(line.text).empty())
            continue;
        const auto fields = textio::split_record(line.text);
        if (fields.size() != 7)
            throw DataError(file, line.number, "expected 7 fields");
        LexiconEntry e;
        e.word = fields[0];
        e.pos = parse_pos(fields[1]);
        long long count = 0;
        if (!textio::parse_int64(fields[2], count) || count < 0)
            throw DataError(file, line.number, "malformed count '" + fields[2] + "'");
        e.corpus_count = static_cast<std::uint64_t>(count);
        for (std::size_t p = 0; p < 4; ++p)
            if (!textio::parse_double(fields[3 + p], e.ratings[p]))
                throw DataError(file, line.number, "malformed rating '" + fields[3 + p] + "'");
        out.push_back(std::move(e));
    }
    return out;
}

LexiconLookup make_lookup(const std::vector<LexiconEntry>& lexicon)
{
    LexiconLookup lookup;
    lookup.reserve(lexicon.size());
    for (const auto& e : lexicon)
        lookup.emplace(e.word, e.ratings);
    return lookup;
}

} // namespace psynorms
