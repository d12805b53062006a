#include "psynorms/regression.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "psynorms/error.hpp"

namespace psynorms {

namespace {

// Columns whose spread is below this fraction of their magnitude are treated as constant.
constexpr double kConstantColumnTolerance = 1e-12;
// Reciprocal condition number below which an unregularized Gram matrix is rank deficient.
constexpr double kMinReciprocalCondition = 1e-13;

} // namespace

DesignMatrix::DesignMatrix(Eigen::MatrixXd features, Eigen::VectorXd targets)
    : features_(std::move(features)), targets_(std::move(targets))
{
    if (features_.rows() != targets_.size())
        throw DataError("design matrix has " + std::to_string(features_.rows()) + " rows but " +
                        std::to_string(targets_.size()) + " targets");
    if (features_.rows() < 2)
        throw DataError("at least 2 training rows are required, got " + std::to_string(features_.rows()));
    if (features_.cols() < 1)
        throw DataError("design matrix has no columns");
    if (!features_.allFinite() || !targets_.allFinite())
        throw NumericalError("design matrix contains non-finite values");
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& x) const
{
    return (x.rowwise() - means.transpose()).array().rowwise() / stds.transpose().array();
}

Eigen::VectorXd Standardizer::apply(std::span<const double> x) const
{
    Eigen::VectorXd z(static_cast<Eigen::Index>(x.size()));
    for (Eigen::Index j = 0; j < z.size(); ++j)
        z[j] = (x[static_cast<std::size_t>(j)] - means[j]) / stds[j];
    return z;
}

Standardizer fit_standardizer(const Eigen::MatrixXd& x)
{
    const auto n = static_cast<double>(x.rows());
    Standardizer s;
    s.means = x.colwise().mean().transpose();
    s.stds.resize(x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double var = (x.col(j).array() - s.means[j]).square().sum() / n;
        const double sd = std::sqrt(var);
        const double scale = std::max(1.0, std::abs(s.means[j]));
        s.stds[j] = sd > kConstantColumnTolerance * scale ? sd : 1.0;
    }
    return s;
}

RidgeModel train_ridge(const DesignMatrix& x, double lambda, ViewKind view)
{
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw UsageError("lambda must be a finite non-negative number");

    Standardizer standardizer = fit_standardizer(x.features());
    const Eigen::MatrixXd z = standardizer.apply(x.features());
    const double y_mean = x.targets().mean();
    const Eigen::VectorXd y_centered = x.targets().array() - y_mean;

    Eigen::MatrixXd gram = z.transpose() * z;
    gram.diagonal().array() += lambda;
    const Eigen::VectorXd rhs = z.transpose() * y_centered;

    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success || (lambda == 0.0 && llt.rcond() < kMinReciprocalCondition))
        throw NumericalError("rank-deficient system in " + std::string(view_id(view)) +
                             " ridge fit; use lambda > 0");
    Eigen::VectorXd weights = llt.solve(rhs);
    if (!weights.allFinite())
        throw NumericalError("non-finite ridge weights in " + std::string(view_id(view)) + " fit");

    return RidgeModel{view, lambda, std::move(standardizer), std::move(weights), y_mean,
                      static_cast<std::size_t>(x.rows())};
}

double predict_ridge(const RidgeModel& m, std::span<const double> x)
{
    if (static_cast<Eigen::Index>(x.size()) != m.weights.size())
        throw DataError("feature dimension " + std::to_string(x.size()) + " does not match model dimension " +
                        std::to_string(m.weights.size()));
    double acc = m.intercept;
    for (Eigen::Index j = 0; j < m.weights.size(); ++j)
        acc += m.weights[j] * ((x[static_cast<std::size_t>(j)] - m.standardizer.means[j]) / m.standardizer.stds[j]);
    return acc;
}

double predict_ridge(const RidgeModel& m, const FeatureVector& x)
{
    if (x.view != m.view)
        throw DataError("feature view " + std::string(view_id(x.view)) + " does not match model view " +
                        std::string(view_id(m.view)));
    return predict_ridge(m, std::span<const double>(x.values));
}

std::set<ViewKind> MultiViewModel::views() const
{
    std::set<ViewKind> out;
    for (const auto& sm : submodels)
        out.insert(sm.view);
    return out;
}

MultiViewModel train_multiview(PropertyKind property, const NormDataset& data, const std::set<ViewKind>& views,
                               const FeatureResources& resources, double lambda)
{
    if (data.property != property)
        throw DataError("dataset property " + std::string(property_id(data.property)) + " does not match " +
                        std::string(property_id(property)));
    if (data.empty())
        throw DataError("empty training dataset for " + std::string(property_id(property)));
    if (views.empty())
        throw UsageError("at least one view is required");

    MultiViewModel model{property, data.scale, lambda, {}};
    for (ViewKind view : views) {
        const auto dim = resources.dimension(view);
        std::vector<std::vector<double>> rows;
        std::vector<double> targets;
        rows.reserve(data.size());
        targets.reserve(data.size());
        for (const auto& r : data.records) {
            auto fv = view_features(resources, view, r.word);
            if (!fv)
                continue;
            rows.push_back(std::move(fv->values));
            targets.push_back(r.rating);
        }
        if (rows.size() < 2)
            throw DataError("view " + std::string(view_id(view)) + " has " + std::to_string(rows.size()) +
                            " usable training rows for " + std::string(property_id(property)) + "; need at least 2");

        Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < dim; ++j)
                x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(targets.data(), static_cast<Eigen::Index>(targets.size()));
        model.submodels.push_back(train_ridge(DesignMatrix(std::move(x), std::move(y)), lambda, view));
    }
    return model;
}

std::optional<double> try_predict_multiview(const MultiViewModel& m, std::string_view word,
                                            const FeatureResources& resources, bool clamp)
{
    double sum = 0.0;
    std::size_t used = 0;
    for (const auto& sm : m.submodels) {
        auto fv = view_features(resources, sm.view, word);
        if (!fv)
            continue;
        sum += predict_ridge(sm, *fv);
        ++used;
    }
    if (used == 0)
        return std::nullopt;
    const double mean = sum / static_cast<double>(used);
    return clamp ? m.scale.clamp(mean) : mean;
}

double predict_multiview(const MultiViewModel& m, std::string_view word, const FeatureResources& resources, bool clamp)
{
    auto p = try_predict_multiview(m, word, resources, clamp);
    if (!p)
        throw DataError("no view of the " + std::string(property_id(m.property)) + " model covers '" +
                        std::string(word) + "'");
    return *p;
}

namespace {

using nlohmann::json;

constexpr std::string_view kModelFormat = "psynorms.multiview/1";

json vector_json(const Eigen::VectorXd& v)
{
    return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vector_from(const json& j, std::size_t expected, const char* field)
{
    const auto values = j.get<std::vector<double>>();
    if (values.size() != expected)
        throw DataError(std::string("model archive: '") + field + "' has wrong length");
    return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

} // namespace

std::string model_to_json(const MultiViewModel& m)
{
    json j;
    j["format"] = kModelFormat;
    j["property"] = property_id(m.property);
    j["scale"] = {{"min", m.scale.min()}, {"max", m.scale.max()}};
    j["lambda"] = m.lambda;
    j["submodels"] = json::array();
    for (const auto& sm : m.submodels) {
        j["submodels"].push_back({
            {"view", view_id(sm.view)},
            {"lambda", sm.lambda},
            {"training_rows", sm.training_rows},
            {"intercept", sm.intercept},
            {"means", vector_json(sm.standardizer.means)},
            {"stds", vector_json(sm.standardizer.stds)},
            {"weights", vector_json(sm.weights)},
        });
    }
    return j.dump(2) + "\n";
}

MultiViewModel model_from_json(std::string_view text)
{
    try {
        const json j = json::parse(text);
        if (j.at("format").get<std::string>() != kModelFormat)
            throw DataError("unsupported model archive format");
        MultiViewModel m{parse_property(j.at("property").get<std::string>()),
                         LikertScale(j.at("scale").at("min").get<double>(), j.at("scale").at("max").get<double>()),
                         j.at("lambda").get<double>(),
                         {}};
        std::set<ViewKind> seen;
        for (const auto& s : j.at("submodels")) {
            const ViewKind view = parse_view(s.at("view").get<std::string>());
            if (!seen.insert(view).second)
                throw DataError("model archive repeats view " + std::string(view_id(view)));
            const auto d = s.at("weights").size();
            RidgeModel rm{view,
                          s.at("lambda").get<double>(),
                          Standardizer{vector_from(s.at("means"), d, "means"), vector_from(s.at("stds"), d, "stds")},
                          vector_from(s.at("weights"), d, "weights"),
                          s.at("intercept").get<double>(),
                          s.at("training_rows").get<std::size_t>()};
            m.submodels.push_back(std::move(rm));
        }
        if (m.submodels.empty() || m.submodels.size() > 3)
            throw DataError("model archive must hold 1 to 3 submodels");
        return m;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed model archive: ") + e.what());
    }
}

void save_model(const MultiViewModel& m, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write file: " + path.string());
    out << model_to_json(m);
    if (!out)
        throw DataError("write failed: " + path.string());
}

MultiViewModel load_model(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return model_from_json(buf.str());
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

} // namespace psynorms
