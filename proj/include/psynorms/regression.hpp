#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "psynorms/features.hpp"
#include "psynorms/norms.hpp"

namespace psynorms {

inline constexpr double kDefaultLambda = 1.0;

/// n x d feature matrix with its targets. Requires n >= 2 and finite entries.
class DesignMatrix {
public:
    DesignMatrix(Eigen::MatrixXd features, Eigen::VectorXd targets);

    Eigen::Index rows() const { return features_.rows(); }
    Eigen::Index cols() const { return features_.cols(); }
    const Eigen::MatrixXd& features() const { return features_; }
    const Eigen::VectorXd& targets() const { return targets_; }

private:
    Eigen::MatrixXd features_;
    Eigen::VectorXd targets_;
};

/// Column means and population standard deviations. Constant columns get std 1.
struct Standardizer {
    Eigen::VectorXd means;
    Eigen::VectorXd stds;

    Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
    Eigen::VectorXd apply(std::span<const double> x) const;
};

Standardizer fit_standardizer(const Eigen::MatrixXd& x);

struct RidgeModel {
    ViewKind view;
    double lambda;
    Standardizer standardizer;
    Eigen::VectorXd weights; // in standardized coordinates
    double intercept;
    std::size_t training_rows;
};

/// Closed-form ridge fit in standardized coordinates with an unpenalized intercept:
/// solves (Z'Z + lambda I) w = Z'(y - mean(y)) by Cholesky.
/// Throws NumericalError when the system is singular (only possible for lambda = 0).
RidgeModel train_ridge(const DesignMatrix& x, double lambda, ViewKind view);

double predict_ridge(const RidgeModel& m, std::span<const double> x);
/// Checks the vector's view and dimension against the model.
double predict_ridge(const RidgeModel& m, const FeatureVector& x);

struct MultiViewModel {
    PropertyKind property;
    LikertScale scale;
    double lambda;
    std::vector<RidgeModel> submodels; // distinct views, 1..3

    std::set<ViewKind> views() const;
};

/// One ridge model per view; rows whose word is out of a view's vocabulary are
/// dropped from that view's training set. Throws DataError if a view keeps fewer
/// than 2 rows.
MultiViewModel train_multiview(PropertyKind property, const NormDataset& data, const std::set<ViewKind>& views,
                               const FeatureResources& resources, double lambda = kDefaultLambda);

/// Mean of the submodel predictions whose view is available for `word`, clamped to
/// the model's scale when `clamp` is set. Throws DataError if no view is available.
double predict_multiview(const MultiViewModel& m, std::string_view word, const FeatureResources& resources,
                         bool clamp = false);

/// Same as predict_multiview, but nullopt instead of an exception when every
/// view is out of vocabulary.
std::optional<double> try_predict_multiview(const MultiViewModel& m, std::string_view word,
                                            const FeatureResources& resources, bool clamp = false);

/// JSON archive with full-precision floats.
std::string model_to_json(const MultiViewModel& m);
MultiViewModel model_from_json(std::string_view text);
void save_model(const MultiViewModel& m, const std::filesystem::path& path);
MultiViewModel load_model(const std::filesystem::path& path);

} // namespace psynorms
