#include "psynorms/norms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "psynorms/error.hpp"
#include "psynorms/textio.hpp"
#include "psynorms/unicode.hpp"

namespace psynorms {

std::string_view property_id(PropertyKind p)
{
    switch (p) {
    case PropertyKind::Concreteness: return "concreteness";
    case PropertyKind::AgeOfAcquisition: return "aoa";
    case PropertyKind::Imageability: return "imageability";
    case PropertyKind::SubjectiveFrequency: return "subj_frequency";
    }
    return "?";
}

std::string_view property_label(PropertyKind p)
{
    switch (p) {
    case PropertyKind::Concreteness: return "Concreteness";
    case PropertyKind::AgeOfAcquisition: return "AoA";
    case PropertyKind::Imageability: return "Imageability";
    case PropertyKind::SubjectiveFrequency: return "Sub. Freq.";
    }
    return "?";
}

PropertyKind parse_property(std::string_view id)
{
    for (auto p : kAllProperties)
        if (id == property_id(p))
            return p;
    if (id == "age_of_acquisition")
        return PropertyKind::AgeOfAcquisition;
    if (id == "subjective_frequency")
        return PropertyKind::SubjectiveFrequency;
    throw UsageError("unknown property '" + std::string(id) +
                     "' (expected concreteness, aoa, imageability or subj_frequency)");
}

LikertScale::LikertScale(double min, double max) : min_(min), max_(max)
{
    if (!std::isfinite(min) || !std::isfinite(max) || !(min < max))
        throw DataError("invalid Likert scale: min must be below max");
}

double LikertScale::clamp(double r) const
{
    return std::clamp(r, min_, max_);
}

LikertScale LikertScale::parse(std::string_view text)
{
    text = textio::trim(text);
    // The separator is the first '-' after the first character, so "-3-3" parses.
    const auto dash = text.find('-', 1);
    double lo = 0, hi = 0;
    if (dash == std::string_view::npos || !textio::parse_double(text.substr(0, dash), lo) ||
        !textio::parse_double(text.substr(dash + 1), hi))
        throw UsageError("bad scale '" + std::string(text) + "' (expected e.g. 1-7)");
    return LikertScale(lo, hi);
}

void OrthographyMap::add_replacement(std::string_view ep_form, std::string_view bp_form)
{
    auto from = unicode::normalize_word(ep_form);
    auto to = unicode::normalize_word(bp_form);
    if (from.empty() || to.empty() || unicode::contains_whitespace(to))
        throw DataError("invalid orthography replacement '" + std::string(ep_form) + "' -> '" + std::string(bp_form) + "'");
    if (discards_.contains(from))
        throw DataError("word '" + from + "' is both replaced and discarded");
    replacements_[std::move(from)] = std::move(to);
}

void OrthographyMap::add_discard(std::string_view ep_form)
{
    auto word = unicode::normalize_word(ep_form);
    if (word.empty())
        throw DataError("empty discard entry");
    if (replacements_.contains(word))
        throw DataError("word '" + word + "' is both replaced and discarded");
    discards_.insert(std::move(word));
}

namespace {

bool is_header(const std::vector<std::string>& fields, std::string_view first, std::string_view second)
{
    return fields.size() == 2 && textio::trim(fields[0]) == first && textio::trim(fields[1]) == second;
}

// Averages records sharing a word, keeping the position of the first occurrence.
std::vector<NormRecord> combine_duplicates(std::vector<NormRecord> records)
{
    std::unordered_map<std::string, std::size_t> slot;
    std::vector<NormRecord> out;
    std::vector<std::size_t> counts;
    std::vector<double> sums;
    for (auto& r : records) {
        auto [it, inserted] = slot.try_emplace(r.word, out.size());
        if (inserted) {
            sums.push_back(r.rating);
            counts.push_back(1);
            out.push_back(std::move(r));
        } else {
            sums[it->second] += r.rating;
            ++counts[it->second];
            if (out[it->second].source != r.source)
                out[it->second].source += "+" + r.source;
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        if (counts[i] > 1)
            out[i].rating = sums[i] / static_cast<double>(counts[i]);
    return out;
}

} // namespace

NormDataset load_norms(const std::filesystem::path& path, PropertyKind property, const LikertScale& scale)
{
    const auto lines = textio::read_lines(path);
    const std::string file = path.string();
    const std::string source = path.stem().string();

    NormDataset ds{property, scale, {}};
    std::unordered_map<std::string, std::size_t> seen;
    bool header_seen = false;
    for (const auto& line : lines) {
        if (textio::trim(line.text).empty())
            continue;
        const auto fields = textio::split_record(line.text);
        if (!header_seen) {
            if (!is_header(fields, "word", "rating"))
                throw DataError(file, line.number, "expected header 'word,rating'");
            header_seen = true;
            continue;
        }
        if (fields.size() != 2)
            throw DataError(file, line.number,
                            "expected 2 fields (word,rating), found " + std::to_string(fields.size()) +
                                " (ratings must use a period as decimal separator)");
        std::string word;
        try {
            word = unicode::normalize_word(fields[0]);
        } catch (const DataError& e) {
            throw DataError(file, line.number, e.what());
        }
        if (word.empty() || unicode::contains_whitespace(word))
            throw DataError(file, line.number, "invalid word '" + fields[0] + "'");
        double rating = 0;
        if (!textio::parse_double(fields[1], rating))
            throw DataError(file, line.number, "malformed rating '" + fields[1] + "'");
        if (!scale.contains(rating))
            throw DataError(file, line.number,
                            "rating " + fields[1] + " outside scale " + textio::format_double(scale.min()) + "-" +
                                textio::format_double(scale.max()));
        if (auto [it, inserted] = seen.try_emplace(word, line.number); !inserted)
            throw DataError(file, line.number,
                            "duplicate word '" + word + "' (first seen on line " + std::to_string(it->second) + ")");
        ds.records.push_back({std::move(word), rating, source});
    }
    if (!header_seen)
        throw DataError(file, 1, "empty norms file (missing 'word,rating' header)");
    return ds;
}

void write_norms(const NormDataset& ds, const std::filesystem::path& path)
{
    std::vector<const NormRecord*> rows;
    rows.reserve(ds.records.size());
    for (const auto& r : ds.records)
        rows.push_back(&r);
    std::sort(rows.begin(), rows.end(), [](const NormRecord* a, const NormRecord* b) { return a->word < b->word; });

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write file: " + path.string());
    out << "word,rating\n";
    for (const auto* r : rows)
        out << r->word << ',' << textio::format_double(r->rating) << '\n';
    if (!out)
        throw DataError("write failed: " + path.string());
}

NormDataset convert_scale(const NormDataset& ds, const LikertScale& target)
{
    if (ds.empty())
        throw DataError("cannot convert the scale of an empty dataset");
    NormDataset out{ds.property, target, ds.records};
    if (ds.scale == target)
        return out;
    const double factor = (target.max() - target.min()) / (ds.scale.max() - ds.scale.min());
    for (auto& r : out.records)
        r.rating = target.clamp(target.min() + (r.rating - ds.scale.min()) * factor);
    return out;
}

NormDataset apply_orthography(const NormDataset& ds, const OrthographyMap& map)
{
    if (map.empty())
        return ds;
    std::vector<NormRecord> kept;
    kept.reserve(ds.records.size());
    for (const auto& r : ds.records) {
        if (map.discards().contains(r.word))
            continue;
        NormRecord copy = r;
        if (auto it = map.replacements().find(r.word); it != map.replacements().end())
            copy.word = it->second;
        kept.push_back(std::move(copy));
    }
    return NormDataset{ds.property, ds.scale, combine_duplicates(std::move(kept))};
}

NormDataset merge_datasets(const NormDataset& a, const NormDataset& b)
{
    if (a.property != b.property)
        throw DataError("cannot merge datasets of different properties (" + std::string(property_id(a.property)) +
                        " vs " + std::string(property_id(b.property)) + ")");
    if (!(a.scale == b.scale))
        throw DataError("cannot merge datasets on different scales; convert first");

    std::unordered_map<std::string, const NormRecord*> in_b;
    for (const auto& r : b.records)
        in_b.emplace(r.word, &r);

    NormDataset out{a.property, a.scale, {}};
    out.records.reserve(a.records.size() + b.records.size());
    std::unordered_set<std::string> taken;
    for (const auto& r : a.records) {
        NormRecord m = r;
        if (auto it = in_b.find(r.word); it != in_b.end()) {
            // (x + y) / 2 evaluates identically for either argument order.
            m.rating = (r.rating + it->second->rating) / 2.0;
            if (it->second->source != r.source)
                m.source = r.source + "+" + it->second->source;
        }
        taken.insert(m.word);
        out.records.push_back(std::move(m));
    }
    for (const auto& r : b.records)
        if (!taken.contains(r.word))
            out.records.push_back(r);
    return out;
}

OrthographyMap load_orthography_map(const std::filesystem::path& path)
{
    const auto lines = textio::read_lines(path);
    const std::string file = path.string();
    OrthographyMap map;
    bool header_seen = false;
    for (const auto& line : lines) {
        const auto text = textio::trim(line.text);
        if (text.empty() || text.front() == '#')
            continue;
        const auto fields = textio::split_record(line.text);
        if (!header_seen) {
            header_seen = true;
            if (is_header(fields, "ep_form", "bp_form"))
                continue;
            throw DataError(file, line.number, "expected header 'ep_form,bp_form'");
        }
        if (fields.size() != 2)
            throw DataError(file, line.number, "expected 2 fields (ep_form,bp_form)");
        try {
            if (textio::trim(fields[1]).empty())
                map.add_discard(fields[0]);
            else
                map.add_replacement(fields[0], fields[1]);
        } catch (const DataError& e) {
            throw DataError(file, line.number, e.what());
        }
    }
    return map;
}

OrthographyMap starter_orthography_map()
{
    OrthographyMap map;
    map.add_replacement("acção", "ação");
    map.add_replacement("adopção", "adoção");
    map.add_replacement("amnistia", "anistia");
    map.add_replacement("ficheiro", "arquivo");
    map.add_replacement("assassínio", "assassinato");
    map.add_replacement("apuramento", "apuração");
    map.add_discard("faneca");
    map.add_discard("faia");
    map.add_discard("rebuçado");
    return map;
}

} // namespace psynorms
