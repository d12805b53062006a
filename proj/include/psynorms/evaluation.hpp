#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "psynorms/features.hpp"
#include "psynorms/lexicon.hpp"
#include "psynorms/norms.hpp"

namespace psynorms {

/// Repeated k-fold partition. `test_folds[rep][fold]` lists the test indices.
struct FoldPlan {
    std::size_t n;
    std::size_t k;
    std::size_t reps;
    std::uint64_t seed;
    std::vector<std::vector<std::vector<std::size_t>>> test_folds;

    /// Complement of one test fold, ascending.
    std::vector<std::size_t> train_indices(std::size_t rep, std::size_t fold) const;
};

/// Each repetition shuffles 0..n-1 with a seeded generator and cuts the shuffle
/// into k contiguous blocks; the first n % k blocks hold one extra index.
FoldPlan make_folds(std::size_t n, std::size_t k, std::size_t reps, std::uint64_t seed);

double mse(std::span<const double> pred, std::span<const double> gold);

/// Sample Pearson correlation; nullopt when either vector is constant.
std::optional<double> pearson(std::span<const double> a, std::span<const double> b);

/// 1-based ranks, ties share their average rank.
std::vector<double> fractional_ranks(std::span<const double> v);

std::optional<double> spearman(std::span<const double> a, std::span<const double> b);

/// `ratings[j][i]` is rater j's score for item i. nullopt when the total-score
/// variance is zero.
std::optional<double> cronbach_alpha(const std::vector<std::vector<double>>& ratings);

using ViewSet = std::set<ViewKind>;

/// The seven non-empty view subsets in reporting order:
/// L, A, B, L+A, L+B, A+B, L+A+B.
std::vector<ViewSet> all_view_combinations();
std::string view_set_label(const ViewSet& views);

struct FoldScore {
    std::size_t rep;
    std::size_t fold;
    std::size_t test_size;
    std::size_t scored; // test words with at least one available view
    std::optional<double> mse;
    std::optional<double> pearson;
    std::optional<double> spearman;
};

struct ComboResult {
    ViewSet views;
    bool failed = false;
    std::string error;
    std::optional<double> mse;
    std::optional<double> pearson;
    std::optional<double> spearman;
    std::size_t mse_undefined = 0;
    std::size_t pearson_undefined = 0;
    std::size_t spearman_undefined = 0;
    std::vector<FoldScore> folds;
};

struct EvalReport {
    PropertyKind property;
    std::uint64_t seed;
    std::size_t k;
    std::size_t reps;
    double lambda;
    std::size_t dataset_size;
    std::vector<ComboResult> results;
};

/// For every combination and every (rep, fold): trains on the training split,
/// predicts the test split without clamping and scores it. Aggregates are means of
/// per-fold scores; undefined correlations are counted and left out of the mean.
/// A training failure in any fold marks that combination as failed.
EvalReport cross_validate(PropertyKind property, const NormDataset& dataset, const FeatureResources& resources,
                          const std::vector<ViewSet>& combos, const FoldPlan& plan, double lambda);

nlohmann::json to_json(const EvalReport& report);
/// Plain-text table with one row per combination: MSE, r, rho.
std::string render_table(const EvalReport& report);

using CorrelationMatrix = std::array<std::array<std::optional<double>, 4>, 4>;

/// Pearson correlations between the four rating columns, indexed by PropertyKind.
CorrelationMatrix property_correlations(const std::vector<LexiconEntry>& lexicon);

/// Property pairs in reporting order: AoA/Concreteness, AoA/Imageability,
/// AoA/SubjFreq, Imageability/SubjFreq, Concreteness/SubjFreq, Imageability/Concreteness.
std::vector<std::pair<PropertyKind, PropertyKind>> correlation_report_pairs();

} // namespace psynorms
