#include "psynorms/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "psynorms/error.hpp"
#include "psynorms/regression.hpp"

namespace psynorms {

namespace {

// Uniform integer in [0, bound) without modulo bias. Spelled out rather than using
// std::uniform_int_distribution so fold plans are identical across standard libraries.
std::uint64_t bounded_draw(std::mt19937_64& gen, std::uint64_t bound)
{
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = gen();
        if (r >= threshold)
            return r % bound;
    }
}

void check_lengths(std::span<const double> a, std::span<const double> b, const char* what)
{
    if (a.size() != b.size())
        throw DataError(std::string(what) + ": length mismatch (" + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()) + ")");
}

double mean_of(std::span<const double> v)
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double population_variance(std::span<const double> v)
{
    const double m = mean_of(v);
    double acc = 0.0;
    for (double x : v)
        acc += (x - m) * (x - m);
    return acc / static_cast<double>(v.size());
}

} // namespace

FoldPlan make_folds(std::size_t n, std::size_t k, std::size_t reps, std::uint64_t seed)
{
    if (k < 2)
        throw UsageError("k must be at least 2");
    if (n < k)
        throw UsageError("cannot split " + std::to_string(n) + " items into " + std::to_string(k) + " folds");
    if (reps < 1)
        throw UsageError("reps must be at least 1");

    FoldPlan plan{n, k, reps, seed, {}};
    std::mt19937_64 gen(seed);
    std::vector<std::size_t> order(n);
    for (std::size_t r = 0; r < reps; ++r) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t i = n - 1; i > 0; --i)
            std::swap(order[i], order[bounded_draw(gen, i + 1)]);

        std::vector<std::vector<std::size_t>> folds(k);
        const std::size_t base = n / k;
        const std::size_t extra = n % k;
        std::size_t pos = 0;
        for (std::size_t f = 0; f < k; ++f) {
            const std::size_t size = base + (f < extra ? 1 : 0);
            folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                            order.begin() + static_cast<std::ptrdiff_t>(pos + size));
            pos += size;
        }
        plan.test_folds.push_back(std::move(folds));
    }
    return plan;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t rep, std::size_t fold) const
{
    std::vector<bool> in_test(n, false);
    for (auto i : test_folds.at(rep).at(fold))
        in_test[i] = true;
    std::vector<std::size_t> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        if (!in_test[i])
            out.push_back(i);
    return out;
}

double mse(std::span<const double> pred, std::span<const double> gold)
{
    check_lengths(pred, gold, "mse");
    if (pred.empty())
        throw DataError("mse: empty input");
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i)
        acc += (pred[i] - gold[i]) * (pred[i] - gold[i]);
    return acc / static_cast<double>(pred.size());
}

std::optional<double> pearson(std::span<const double> a, std::span<const double> b)
{
    check_lengths(a, b, "pearson");
    if (a.size() < 2)
        throw DataError("pearson: at least 2 observations are required");
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0)
        return std::nullopt;
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::vector<double> fractional_ranks(std::span<const double> v)
{
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });

    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]])
            ++j;
        // positions i..j (0-based) share ranks i+1..j+1
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t)
            ranks[order[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

std::optional<double> spearman(std::span<const double> a, std::span<const double> b)
{
    check_lengths(a, b, "spearman");
    const auto ra = fractional_ranks(a);
    const auto rb = fractional_ranks(b);
    return pearson(ra, rb);
}

std::optional<double> cronbach_alpha(const std::vector<std::vector<double>>& ratings)
{
    const std::size_t k = ratings.size();
    if (k < 2)
        throw DataError("cronbach_alpha: at least 2 raters are required");
    const std::size_t n = ratings.front().size();
    if (n < 2)
        throw DataError("cronbach_alpha: at least 2 items are required");
    for (const auto& r : ratings)
        if (r.size() != n)
            throw DataError("cronbach_alpha: raters scored different numbers of items");

    std::vector<double> totals(n, 0.0);
    double rater_variance_sum = 0.0;
    for (const auto& r : ratings) {
        rater_variance_sum += population_variance(r);
        for (std::size_t i = 0; i < n; ++i)
            totals[i] += r[i];
    }
    const double total_variance = population_variance(totals);
    if (total_variance == 0.0)
        return std::nullopt;
    const double kk = static_cast<double>(k);
    return kk / (kk - 1.0) * (1.0 - rater_variance_sum / total_variance);
}

std::vector<ViewSet> all_view_combinations()
{
    using enum ViewKind;
    return {{Lexical},
            {EmbeddingA},
            {EmbeddingB},
            {Lexical, EmbeddingA},
            {Lexical, EmbeddingB},
            {EmbeddingA, EmbeddingB},
            {Lexical, EmbeddingA, EmbeddingB}};
}

std::string view_set_label(const ViewSet& views)
{
    std::string out;
    for (ViewKind v : views) {
        if (!out.empty())
            out += " + ";
        out += view_label(v);
    }
    return out;
}

EvalReport cross_validate(PropertyKind property, const NormDataset& dataset, const FeatureResources& resources,
                          const std::vector<ViewSet>& combos, const FoldPlan& plan, double lambda)
{
    if (dataset.property != property)
        throw DataError("dataset property does not match " + std::string(property_id(property)));
    if (plan.n != dataset.size())
        throw UsageError("fold plan covers " + std::to_string(plan.n) + " items but the dataset has " +
                         std::to_string(dataset.size()));

    ViewSet needed;
    for (const auto& c : combos) {
        if (c.empty())
            throw UsageError("empty view combination");
        needed.insert(c.begin(), c.end());
    }

    // Features are fixed per word, so build them once per view.
    std::map<ViewKind, std::vector<std::optional<std::vector<double>>>> cache;
    std::map<ViewKind, std::size_t> dims;
    for (ViewKind v : needed) {
        dims[v] = resources.dimension(v);
        auto& rows = cache[v];
        rows.reserve(dataset.size());
        for (const auto& r : dataset.records) {
            auto fv = view_features(resources, v, r.word);
            rows.push_back(fv ? std::optional(std::move(fv->values)) : std::nullopt);
        }
    }

    EvalReport report{property, plan.seed, plan.k, plan.reps, lambda, dataset.size(), {}};
    for (const auto& c : combos) {
        ComboResult r;
        r.views = c;
        report.results.push_back(std::move(r));
    }

    for (std::size_t rep = 0; rep < plan.reps; ++rep) {
        for (std::size_t fold = 0; fold < plan.k; ++fold) {
            const auto train = plan.train_indices(rep, fold);
            const auto& test = plan.test_folds[rep][fold];

            // A view's ridge model depends only on the fold, never on which combination
            // uses it, so each view is trained once per fold and shared.
            std::map<ViewKind, std::vector<std::optional<double>>> view_pred;
            std::map<ViewKind, std::string> view_error;
            for (ViewKind v : needed) {
                const auto& rows = cache[v];
                std::vector<std::size_t> usable;
                for (auto i : train)
                    if (rows[i])
                        usable.push_back(i);
                try {
                    if (usable.size() < 2)
                        throw DataError("view " + std::string(view_id(v)) + " has " + std::to_string(usable.size()) +
                                        " usable training rows; need at least 2");
                    Eigen::MatrixXd x(static_cast<Eigen::Index>(usable.size()), static_cast<Eigen::Index>(dims[v]));
                    Eigen::VectorXd y(static_cast<Eigen::Index>(usable.size()));
                    for (std::size_t r = 0; r < usable.size(); ++r) {
                        const auto& row = *rows[usable[r]];
                        for (std::size_t j = 0; j < row.size(); ++j)
                            x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = row[j];
                        y[static_cast<Eigen::Index>(r)] = dataset.records[usable[r]].rating;
                    }
                    const RidgeModel model = train_ridge(DesignMatrix(std::move(x), std::move(y)), lambda, v);
                    auto& preds = view_pred[v];
                    for (auto i : test)
                        preds.push_back(rows[i] ? std::optional(predict_ridge(model, std::span<const double>(*rows[i])))
                                                : std::nullopt);
                } catch (const std::exception& e) {
                    view_error[v] = e.what();
                }
            }

            for (auto& result : report.results) {
                if (result.failed)
                    continue;
                for (ViewKind v : result.views) {
                    if (auto it = view_error.find(v); it != view_error.end()) {
                        result.failed = true;
                        result.error = "rep " + std::to_string(rep) + " fold " + std::to_string(fold) + ": " + it->second;
                        break;
                    }
                }
                if (result.failed)
                    continue;

                std::vector<double> pred, gold;
                for (std::size_t t = 0; t < test.size(); ++t) {
                    double sum = 0.0;
                    std::size_t used = 0;
                    for (ViewKind v : result.views) {
                        if (const auto& p = view_pred[v][t]) {
                            sum += *p;
                            ++used;
                        }
                    }
                    if (used == 0)
                        continue;
                    pred.push_back(sum / static_cast<double>(used));
                    gold.push_back(dataset.records[test[t]].rating);
                }
                FoldScore score{rep, fold, test.size(), pred.size(), std::nullopt, std::nullopt, std::nullopt};
                if (!pred.empty())
                    score.mse = mse(pred, gold);
                if (pred.size() >= 2) {
                    score.pearson = pearson(pred, gold);
                    score.spearman = spearman(pred, gold);
                }
                result.folds.push_back(score);
            }
        }
    }

    for (auto& result : report.results) {
        if (result.failed)
            continue;
        auto aggregate = [&](auto member, std::size_t& undefined) -> std::optional<double> {
            double sum = 0.0;
            std::size_t count = 0;
            for (const auto& f : result.folds) {
                if (const auto& v = f.*member) {
                    sum += *v;
                    ++count;
                } else {
                    ++undefined;
                }
            }
            return count == 0 ? std::nullopt : std::optional(sum / static_cast<double>(count));
        };
        result.mse = aggregate(&FoldScore::mse, result.mse_undefined);
        result.pearson = aggregate(&FoldScore::pearson, result.pearson_undefined);
        result.spearman = aggregate(&FoldScore::spearman, result.spearman_undefined);
    }
    return report;
}

namespace {

nlohmann::json optional_json(const std::optional<double>& v)
{
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

} // namespace

nlohmann::json to_json(const EvalReport& report)
{
    using nlohmann::json;
    json j;
    j["configuration"] = {
        {"property", property_id(report.property)},
        {"seed", report.seed},
        {"k", report.k},
        {"reps", report.reps},
        {"lambda", report.lambda},
        {"dataset_size", report.dataset_size},
        {"aggregation", "mean of per-fold scores"},
    };
    j["results"] = json::array();
    for (const auto& r : report.results) {
        json views = json::array();
        for (ViewKind v : r.views)
            views.push_back(view_id(v));
        json folds = json::array();
        for (const auto& f : r.folds) {
            folds.push_back({{"rep", f.rep},
                             {"fold", f.fold},
                             {"test_size", f.test_size},
                             {"scored", f.scored},
                             {"mse", optional_json(f.mse)},
                             {"pearson", optional_json(f.pearson)},
                             {"spearman", optional_json(f.spearman)}});
        }
        json entry = {{"views", views},
                      {"label", view_set_label(r.views)},
                      {"failed", r.failed},
                      {"mse", optional_json(r.mse)},
                      {"pearson", optional_json(r.pearson)},
                      {"spearman", optional_json(r.spearman)},
                      {"undefined", {{"mse", r.mse_undefined}, {"pearson", r.pearson_undefined}, {"spearman", r.spearman_undefined}}},
                      {"folds", folds}};
        if (r.failed)
            entry["error"] = r.error;
        j["results"].push_back(std::move(entry));
    }
    return j;
}

std::string render_table(const EvalReport& report)
{
    auto cell = [](const std::optional<double>& v) {
        std::ostringstream s;
        if (v)
            s << std::fixed << std::setprecision(4) << *v;
        else
            s << "n/a";
        return s.str();
    };

    std::ostringstream out;
    out << property_label(report.property) << " (" << report.dataset_size << ")  " << report.reps << "x" << report.k
        << "-fold CV, lambda " << report.lambda << ", seed " << report.seed << "\n";
    out << std::left << std::setw(30) << "Regressors" << std::right << std::setw(10) << "MSE" << std::setw(10) << "r"
        << std::setw(10) << "rho" << "\n";
    for (const auto& r : report.results) {
        out << std::left << std::setw(30) << view_set_label(r.views) << std::right;
        if (r.failed) {
            out << "  failed: " << r.error << "\n";
            continue;
        }
        out << std::setw(10) << cell(r.mse) << std::setw(10) << cell(r.pearson) << std::setw(10) << cell(r.spearman)
            << "\n";
    }
    return out.str();
}

CorrelationMatrix property_correlations(const std::vector<LexiconEntry>& lexicon)
{
    if (lexicon.size() < 2)
        throw DataError("property correlations need at least 2 lexicon entries");
    std::array<std::vector<double>, 4> columns;
    for (const auto& e : lexicon)
        for (std::size_t p = 0; p < 4; ++p)
            columns[p].push_back(e.ratings[p]);

    CorrelationMatrix m;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i; j < 4; ++j) {
            auto r = pearson(columns[i], columns[j]);
            if (i == j && r)
                r = 1.0;
            m[i][j] = r;
            m[j][i] = r;
        }
    }
    return m;
}

std::vector<std::pair<PropertyKind, PropertyKind>> correlation_report_pairs()
{
    using enum PropertyKind;
    return {{AgeOfAcquisition, Concreteness},   {AgeOfAcquisition, Imageability},
            {AgeOfAcquisition, SubjectiveFrequency}, {Imageability, SubjectiveFrequency},
            {Concreteness, SubjectiveFrequency},     {Imageability, Concreteness}};
}

} // namespace psynorms
