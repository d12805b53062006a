#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "psynorms/features.hpp"
#include "psynorms/norms.hpp"
#include "psynorms/regression.hpp"

namespace psynorms {

enum class PartOfSpeech { Noun, Verb, Adjective, Adverb, Other };

std::string_view pos_id(PartOfSpeech p); // "noun", "verb", "adjective", "adverb", "other"
/// Accepts English names, common abbreviations (n, v, adj, adv) and Portuguese
/// tags (substantivo, s., verbo, adjetivo, advérbio). Anything else is Other.
PartOfSpeech parse_pos(std::string_view tag);

struct DictionaryEntry {
    std::string word;
    PartOfSpeech pos;
};

/// `word,pos` CSV. A word listed more than once keeps its first category.
std::vector<DictionaryEntry> load_dictionary(const std::filesystem::path& path);

/// Ratings indexed by PropertyKind order (concreteness, aoa, imageability, subj_frequency).
using Ratings = std::array<double, 4>;

inline double rating_of(const Ratings& r, PropertyKind p) { return r[static_cast<std::size_t>(p)]; }

struct LexiconEntry {
    std::string word;
    PartOfSpeech pos;
    std::uint64_t corpus_count;
    Ratings ratings;
};

struct LexiconBuild {
    std::vector<LexiconEntry> entries;
    std::map<PartOfSpeech, std::size_t> pos_counts;
};

inline constexpr std::uint64_t kDefaultMinCount = 8;

/// Keeps nouns, verbs, adjectives and adverbs that are not loanwords and occur at
/// least `min_count` times in `freq`, and annotates them with clamped predictions
/// of all four models. Output is sorted by code point.
LexiconBuild build_lexicon(const std::vector<DictionaryEntry>& entries, const std::unordered_set<std::string>& loanwords,
                           const FrequencyList& freq, std::uint64_t min_count,
                           const std::map<PropertyKind, MultiViewModel>& models, const FeatureResources& resources);

inline constexpr std::string_view kLexiconHeader = "word,pos,count,concreteness,aoa,imageability,subj_frequency";

void write_lexicon(const std::vector<LexiconEntry>& lexicon, const std::filesystem::path& path);
std::vector<LexiconEntry> read_lexicon(const std::filesystem::path& path);

using LexiconLookup = std::unordered_map<std::string, Ratings>;
LexiconLookup make_lookup(const std::vector<LexiconEntry>& lexicon);

} // namespace psynorms
