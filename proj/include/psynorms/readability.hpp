#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "psynorms/lexicon.hpp"
#include "psynorms/regression.hpp"

namespace psynorms {

struct TextProfile {
    std::vector<std::string> tokens;
    std::size_t sentences;
    std::unordered_map<std::string, std::size_t> type_counts;
    std::vector<std::size_t> syllables; // per token

    std::size_t word_count() const { return tokens.size(); }
    std::size_t syllable_total() const;
};

/// Sentences end at '.', '!', '?' or '…' followed by whitespace or end of text;
/// only segments containing a token count. Tokens are maximal runs of letters and
/// hyphens (at least one letter), lowercased. Throws DataError when there is no token.
TextProfile profile_text(std::string_view text);

/// Vowel groups, counting accented vowels; at least 1.
std::size_t count_syllables(std::string_view word);

/// Feature name -> value. std::map keeps the names ordered for reports.
using TextFeatures = std::map<std::string, double>;

inline constexpr std::size_t kDefaultMattrWindow = 50;

double flesch_bp(std::size_t words, std::size_t sentences, std::size_t syllables);
double honore(std::size_t tokens, std::size_t types, std::size_t hapaxes);
double brunet(std::size_t tokens, std::size_t types);
double mattr(const std::vector<std::string>& tokens, std::size_t window = kDefaultMattrWindow);

/// flesch_bp, honore, brunet, dale_chall, gunning_fog, mattr.
TextFeatures classic_formulas(const TextProfile& p, const std::unordered_set<std::string>& easy_words,
                              std::size_t mattr_window = kDefaultMattrWindow);

struct PsycholinguisticFeatures {
    TextFeatures values;      // mean_<property>, std_<property>
    std::size_t covered = 0;  // token occurrences found in the lexicon
    bool uncovered = false;   // no token found; values filled with the scale midpoint
};

PsycholinguisticFeatures psycholinguistic_features(const TextProfile& p, const LexiconLookup& lexicon);

enum class GradeLabel { G3, G4, G5, G6 };
inline constexpr std::size_t kGradeCount = 4;

std::string_view grade_id(GradeLabel g); // "3".."6"
GradeLabel parse_grade(std::string_view text);

struct LabeledSample {
    std::vector<double> features;
    GradeLabel label;
};

/// One-vs-rest kernel regularized least squares with a Gaussian kernel over
/// standardized features.
class GradeClassifier {
public:
    /// gamma <= 0 selects 1 / feature count. Needs at least 8 samples and 2 classes.
    static GradeClassifier train(const std::vector<LabeledSample>& samples, double gamma, double lambda);

    /// Score per grade (rows of the returned matrix follow `x`, columns follow
    /// GradeLabel order; classes absent from training score -inf).
    Eigen::MatrixXd scores(const std::vector<std::vector<double>>& x) const;
    /// Highest score wins; ties go to the lower grade.
    GradeLabel predict(const std::vector<double>& x) const;

    double gamma() const { return gamma_; }

private:
    Standardizer standardizer_;
    Eigen::MatrixXd support_; // standardized training rows
    Eigen::MatrixXd coeffs_;  // n x kGradeCount
    std::array<bool, kGradeCount> present_{};
    double gamma_ = 0.0;
};

/// Macro-averaged F1 over the classes present in `gold`.
double macro_f1(const std::vector<GradeLabel>& gold, const std::vector<GradeLabel>& pred);

struct LabeledText {
    TextFeatures features;
    GradeLabel label;
};

struct FeatureSubset {
    std::string name;
    std::vector<std::string> features;
};

/// Single formulas, per-property mean/std pairs and the combined psycholinguistic
/// set, in the usual reporting order.
std::vector<FeatureSubset> default_feature_subsets();

struct SubsetScore {
    std::string name;
    double f1;
};

struct ClassifierSettings {
    double gamma = 0.0; // <= 0: 1 / feature count
    double lambda = 0.1;
    std::size_t folds = 10;
    std::uint64_t seed = 1;
};

/// k-fold cross-validated macro-F1 per subset. Test-fold predictions are pooled
/// before scoring.
std::vector<SubsetScore> evaluate_features(const std::vector<LabeledText>& corpus,
                                           const std::vector<FeatureSubset>& subsets,
                                           const ClassifierSettings& settings);

std::vector<LabeledSample> select_features(const std::vector<LabeledText>& corpus, const std::vector<std::string>& names);

} // namespace psynorms
