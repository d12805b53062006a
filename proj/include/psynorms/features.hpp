#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace psynorms {

enum class ViewKind { Lexical, EmbeddingA, EmbeddingB };

inline constexpr std::array<ViewKind, 3> kAllViews = {ViewKind::Lexical, ViewKind::EmbeddingA,
                                                      ViewKind::EmbeddingB};

/// "lexical", "embedding_a", "embedding_b"
std::string_view view_id(ViewKind v);
/// Also accepts the aliases "skipgram" / "glove".
ViewKind parse_view(std::string_view id);
/// Display label: "Lexical", "Skip-gram", "GloVe".
std::string_view view_label(ViewKind v);

inline constexpr std::size_t kLexicalDimension = 13;

struct FeatureVector {
    ViewKind view;
    std::vector<double> values;
};

/// Word counts from one corpus. Absent words have count 0; stored counts are >= 1.
/// `diversity` holds the optional third column (number of documents containing the word).
struct FrequencyList {
    std::string name;
    std::unordered_map<std::string, std::uint64_t> counts;
    std::unordered_map<std::string, std::uint64_t> diversity;
    std::uint64_t total_tokens = 0;

    std::uint64_t count(std::string_view word) const;
    std::uint64_t diversity_count(std::string_view word) const;
};

/// TSV `word<TAB>count[<TAB>diversity]` with an optional `#total=N` line.
/// Without the header the total is the sum of counts.
FrequencyList load_frequency_list(const std::filesystem::path& path, std::string name);

/// ln(count + 1); 0 for absent words.
double log_frequency(const FrequencyList& fl, std::string_view word);
double log_diversity(const FrequencyList& fl, std::string_view word);

/// One word set per school-dictionary grade, in grade order.
struct GradeLexicons {
    std::array<std::unordered_set<std::string>, 6> per_grade;
};

GradeLexicons load_grade_lexicons(std::span<const std::filesystem::path> paths);

/// Frequency sources for the lexical view. Contextual diversity comes from the
/// third column of `subtlex`.
struct LexicalSources {
    FrequencyList subtlex;
    FrequencyList subimdb;
    FrequencyList written;
    FrequencyList spoken;
    FrequencyList mixed;
};

/// The 13 lexical features:
///   [0..5]  log freq SUBTLEX, log diversity SUBTLEX, log freq SubIMDb,
///           log freq written, log freq spoken, log freq mixed
///   [6]     length in Unicode scalar values
///   [7..12] grade-1 .. grade-6 dictionary membership (0/1)
FeatureVector lexical_view(std::string_view word, const LexicalSources& sources, const GradeLexicons& grades);

/// Pre-trained word vectors for one embedding view, stored row-major in a single buffer.
class EmbeddingModel {
public:
    EmbeddingModel(ViewKind kind, std::size_t dimension);

    ViewKind kind() const { return kind_; }
    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return index_.size(); }
    /// Number of repeated words skipped while loading (first occurrence wins).
    std::size_t duplicates_skipped() const { return duplicates_; }

    /// Returns false (and keeps the existing vector) if the word is already present.
    /// Throws DataError on a length mismatch or non-finite component.
    bool add(std::string word, std::span<const double> values);

    std::optional<std::span<const float>> find(std::string_view word) const;
    const std::vector<std::string>& words() const { return words_; }

    void note_duplicate() { ++duplicates_; }

private:
    ViewKind kind_;
    std::size_t dimension_;
    std::vector<std::string> words_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<float> data_;
    std::size_t duplicates_ = 0;
};

/// Plain-text vectors: optional "vocab_size dimension" header, then
/// `word v1 ... vd` per line. Without a header the dimension is taken from the
/// first row.
EmbeddingModel load_embeddings(const std::filesystem::path& path, ViewKind kind);

/// Writes the text format with a header line.
void write_embeddings(const EmbeddingModel& model, const std::filesystem::path& path);

/// The stored vector, or nullopt when out of vocabulary.
std::optional<FeatureVector> embedding_view(std::string_view word, const EmbeddingModel& model);

/// Everything needed to build any view for any word.
struct FeatureResources {
    LexicalSources lexical;
    GradeLexicons grades;
    std::optional<EmbeddingModel> embedding_a;
    std::optional<EmbeddingModel> embedding_b;

    /// The model backing an embedding view, or nullptr when not loaded.
    const EmbeddingModel* embedding(ViewKind v) const;
    /// Feature dimension of a view; throws DataError when the view's model is not loaded.
    std::size_t dimension(ViewKind v) const;
};

/// Features of `word` in view `v`; nullopt when the word is out of the view's vocabulary.
/// Throws DataError when an embedding view is requested but not loaded.
std::optional<FeatureVector> view_features(const FeatureResources& res, ViewKind v, std::string_view word);

} // namespace psynorms
