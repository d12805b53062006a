#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace psynorms {

enum class PropertyKind { Concreteness, AgeOfAcquisition, Imageability, SubjectiveFrequency };

inline constexpr std::array<PropertyKind, 4> kAllProperties = {
    PropertyKind::Concreteness, PropertyKind::AgeOfAcquisition, PropertyKind::Imageability,
    PropertyKind::SubjectiveFrequency};

/// Short identifier used in file names, CLI arguments and JSON: "concreteness",
/// "aoa", "imageability", "subj_frequency".
std::string_view property_id(PropertyKind p);
PropertyKind parse_property(std::string_view id); // throws UsageError
std::string_view property_label(PropertyKind p);  // human-readable

/// Bounded rating scale. Construction enforces min < max.
class LikertScale {
public:
    LikertScale(double min, double max);

    double min() const { return min_; }
    double max() const { return max_; }
    double midpoint() const { return 0.5 * (min_ + max_); }
    bool contains(double r) const { return r >= min_ && r <= max_; }
    double clamp(double r) const;

    /// Parses "1-7" style text.
    static LikertScale parse(std::string_view text);

    friend bool operator==(const LikertScale&, const LikertScale&) = default;

private:
    double min_;
    double max_;
};

struct NormRecord {
    std::string word;
    double rating;
    std::string source;
};

struct NormDataset {
    PropertyKind property;
    LikertScale scale;
    std::vector<NormRecord> records;

    std::size_t size() const { return records.size(); }
    bool empty() const { return records.empty(); }
};

/// EP -> BP word-form adjustments. A word is either rewritten or discarded, never both.
class OrthographyMap {
public:
    OrthographyMap() = default;

    void add_replacement(std::string_view ep_form, std::string_view bp_form);
    void add_discard(std::string_view ep_form);

    const std::unordered_map<std::string, std::string>& replacements() const { return replacements_; }
    const std::unordered_set<std::string>& discards() const { return discards_; }
    bool empty() const { return replacements_.empty() && discards_.empty(); }

private:
    std::unordered_map<std::string, std::string> replacements_;
    std::unordered_set<std::string> discards_;
};

/// Reads a `word,rating` CSV (header required). Words are normalized; every
/// rating must lie inside `scale` and words must be unique within the file.
NormDataset load_norms(const std::filesystem::path& path, PropertyKind property, const LikertScale& scale);

/// Writes `word,rating` with round-trip precision, rows sorted by word.
void write_norms(const NormDataset& ds, const std::filesystem::path& path);

/// Endpoint-preserving affine rescaling onto `target`.
NormDataset convert_scale(const NormDataset& ds, const LikertScale& target);

/// Applies rewrites and discards. Records that collide after a rewrite are
/// combined by averaging their ratings.
NormDataset apply_orthography(const NormDataset& ds, const OrthographyMap& map);

/// Union of two datasets of the same property and scale. Shared words get the
/// mean of the two ratings. Records of `a` come first, in order, then the
/// words only `b` has.
NormDataset merge_datasets(const NormDataset& a, const NormDataset& b);

/// Reads an `ep_form,bp_form` CSV; an empty bp_form marks a discard.
OrthographyMap load_orthography_map(const std::filesystem::path& path);

/// The adjustments quoted as examples for the EP -> BP adaptation.
OrthographyMap starter_orthography_map();

} // namespace psynorms
