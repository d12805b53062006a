#include "psynorms/readability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "psynorms/error.hpp"
#include "psynorms/evaluation.hpp"
#include "psynorms/unicode.hpp"

namespace psynorms {

namespace {

bool is_terminator(UChar32 c)
{
    return c == '.' || c == '!' || c == '?' || c == 0x2026; // …
}

bool is_hyphen(UChar32 c)
{
    return c == '-' || c == 0x2010 || c == 0x2011;
}

bool is_letter(UChar32 c)
{
    return u_hasBinaryProperty(c, UCHAR_ALPHABETIC) || u_charType(c) == U_NON_SPACING_MARK;
}

bool is_vowel(UChar32 c)
{
    switch (c) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y':
    case 0xE1: case 0xE0: case 0xE2: case 0xE3: // á à â ã
    case 0xE9: case 0xE8: case 0xEA:            // é è ê
    case 0xED: case 0xEC: case 0xEE:            // í ì î
    case 0xF3: case 0xF2: case 0xF4: case 0xF5: // ó ò ô õ
    case 0xFA: case 0xF9: case 0xFB: case 0xFC: // ú ù û ü
        return true;
    default:
        return false;
    }
}

std::string nfc(std::string_view text)
{
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
    icu::UnicodeString u = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
    icu::UnicodeString out = norm->normalize(u, status);
    if (U_FAILURE(status))
        throw DataError(std::string("NFC normalization failed: ") + u_errorName(status));
    std::string s;
    out.toUTF8String(s);
    return s;
}

double population_std(const std::vector<double>& v, double mean)
{
    double acc = 0.0;
    for (double x : v)
        acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(v.size()));
}

} // namespace

std::size_t TextProfile::syllable_total() const
{
    return std::accumulate(syllables.begin(), syllables.end(), std::size_t{0});
}

std::size_t count_syllables(std::string_view word)
{
    const auto* s = reinterpret_cast<const uint8_t*>(word.data());
    const auto length = static_cast<int32_t>(word.size());
    int32_t i = 0;
    std::size_t groups = 0;
    bool in_vowel = false;
    while (i < length) {
        UChar32 c;
        U8_NEXT(s, i, length, c);
        const bool v = c >= 0 && is_vowel(u_tolower(c));
        if (v && !in_vowel)
            ++groups;
        in_vowel = v;
    }
    return std::max<std::size_t>(groups, 1);
}

TextProfile profile_text(std::string_view raw)
{
    if (!unicode::is_valid_utf8(raw))
        throw DataError("text is not valid UTF-8");
    const std::string text = nfc(raw);
    const auto* s = reinterpret_cast<const uint8_t*>(text.data());
    const auto length = static_cast<int32_t>(text.size());

    TextProfile p{{}, 0, {}, {}};
    std::size_t pending = 0; // tokens in the current sentence
    std::string current;
    bool has_letter = false;

    auto flush_token = [&] {
        if (has_letter) {
            auto first = current.find_first_not_of('-');
            auto last = current.find_last_not_of('-');
            std::string token = unicode::normalize_word(std::string_view(current).substr(first, last - first + 1));
            ++p.type_counts[token];
            p.syllables.push_back(count_syllables(token));
            p.tokens.push_back(std::move(token));
            ++pending;
        }
        current.clear();
        has_letter = false;
    };

    int32_t i = 0;
    while (i < length) {
        const int32_t start = i;
        UChar32 c;
        U8_NEXT(s, i, length, c);
        if (is_letter(c) || is_hyphen(c)) {
            if (is_letter(c))
                has_letter = true;
            current.append(text, static_cast<std::size_t>(start), static_cast<std::size_t>(i - start));
            continue;
        }
        flush_token();
        if (is_terminator(c)) {
            // Swallow runs such as "?!" or "...".
            int32_t j = i;
            UChar32 next = 0;
            while (j < length) {
                int32_t k = j;
                U8_NEXT(s, k, length, next);
                if (!is_terminator(next))
                    break;
                j = k;
            }
            i = j;
            bool boundary = (j >= length);
            if (!boundary) {
                int32_t k = j;
                U8_NEXT(s, k, length, next);
                boundary = u_isUWhiteSpace(next);
            }
            if (boundary && pending > 0) {
                ++p.sentences;
                pending = 0;
            }
        }
    }
    flush_token();
    if (pending > 0)
        ++p.sentences;
    if (p.tokens.empty())
        throw DataError("text has no word tokens");
    return p;
}

double flesch_bp(std::size_t words, std::size_t sentences, std::size_t syllables)
{
    const double w = static_cast<double>(words);
    return 248.835 - 1.015 * (w / static_cast<double>(sentences)) - 84.6 * (static_cast<double>(syllables) / w);
}

double honore(std::size_t tokens, std::size_t types, std::size_t hapaxes)
{
    // All types being hapaxes would zero the denominator.
    const double ratio = std::min(static_cast<double>(hapaxes) / static_cast<double>(types), 0.9999);
    return 100.0 * std::log(static_cast<double>(tokens)) / (1.0 - ratio);
}

double brunet(std::size_t tokens, std::size_t types)
{
    return std::pow(static_cast<double>(tokens), std::pow(static_cast<double>(types), -0.165));
}

double mattr(const std::vector<std::string>& tokens, std::size_t window)
{
    if (tokens.empty())
        throw DataError("mattr: no tokens");
    if (window == 0)
        throw UsageError("mattr window must be positive");
    const std::size_t w = std::min(window, tokens.size());
    std::unordered_map<std::string_view, std::size_t> counts;
    for (std::size_t i = 0; i < w; ++i)
        ++counts[tokens[i]];
    double sum = static_cast<double>(counts.size());
    std::size_t windows = 1;
    for (std::size_t i = w; i < tokens.size(); ++i) {
        ++counts[tokens[i]];
        auto it = counts.find(tokens[i - w]);
        if (--it->second == 0)
            counts.erase(it);
        sum += static_cast<double>(counts.size());
        ++windows;
    }
    return sum / (static_cast<double>(windows) * static_cast<double>(w));
}

TextFeatures classic_formulas(const TextProfile& p, const std::unordered_set<std::string>& easy_words,
                              std::size_t mattr_window)
{
    const std::size_t n = p.word_count();
    const double words = static_cast<double>(n);
    const double sentences = static_cast<double>(p.sentences);
    const std::size_t types = p.type_counts.size();
    std::size_t hapaxes = 0;
    for (const auto& [_, c] : p.type_counts)
        if (c == 1)
            ++hapaxes;

    std::size_t hard = 0, complex = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!easy_words.contains(p.tokens[i]))
            ++hard;
        if (p.syllables[i] >= 3)
            ++complex;
    }

    TextFeatures f;
    f["flesch_bp"] = flesch_bp(n, p.sentences, p.syllable_total());
    f["honore"] = honore(n, types, hapaxes);
    f["brunet"] = brunet(n, types);
    f["dale_chall"] = 0.1579 * (100.0 * static_cast<double>(hard) / words) + 0.0496 * (words / sentences);
    f["gunning_fog"] = 0.4 * (words / sentences + 100.0 * static_cast<double>(complex) / words);
    f["mattr"] = mattr(p.tokens, mattr_window);
    return f;
}

PsycholinguisticFeatures psycholinguistic_features(const TextProfile& p, const LexiconLookup& lexicon)
{
    std::array<std::vector<double>, 4> values;
    PsycholinguisticFeatures out;
    for (const auto& t : p.tokens) {
        auto it = lexicon.find(t);
        if (it == lexicon.end())
            continue;
        ++out.covered;
        for (std::size_t k = 0; k < 4; ++k)
            values[k].push_back(it->second[k]);
    }
    out.uncovered = out.covered == 0;
    for (auto prop : kAllProperties) {
        const auto k = static_cast<std::size_t>(prop);
        const std::string id(property_id(prop));
        if (out.uncovered) {
            out.values["mean_" + id] = 4.0;
            out.values["std_" + id] = 4.0;
            continue;
        }
        const double mean = std::accumulate(values[k].begin(), values[k].end(), 0.0) / static_cast<double>(values[k].size());
        out.values["mean_" + id] = mean;
        out.values["std_" + id] = population_std(values[k], mean);
    }
    return out;
}

std::string_view grade_id(GradeLabel g)
{
    switch (g) {
    case GradeLabel::G3: return "3";
    case GradeLabel::G4: return "4";
    case GradeLabel::G5: return "5";
    case GradeLabel::G6: return "6";
    }
    return "?";
}

GradeLabel parse_grade(std::string_view text)
{
    std::string t(text);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (!t.empty() && t.front() == 'g')
        t.erase(0, 1);
    if (t == "3")
        return GradeLabel::G3;
    if (t == "4")
        return GradeLabel::G4;
    if (t == "5")
        return GradeLabel::G5;
    if (t == "6")
        return GradeLabel::G6;
    throw DataError("unknown grade '" + std::string(text) + "' (expected 3, 4, 5 or 6)");
}

GradeClassifier GradeClassifier::train(const std::vector<LabeledSample>& samples, double gamma, double lambda)
{
    if (samples.size() < 8)
        throw DataError("grade classifier needs at least 8 texts, got " + std::to_string(samples.size()));
    if (!(lambda > 0.0))
        throw UsageError("classifier lambda must be positive");
    const std::size_t d = samples.front().features.size();
    if (d == 0)
        throw DataError("grade classifier needs at least one feature");

    GradeClassifier c;
    const auto n = static_cast<Eigen::Index>(samples.size());
    Eigen::MatrixXd x(n, static_cast<Eigen::Index>(d));
    Eigen::MatrixXd y = Eigen::MatrixXd::Constant(n, kGradeCount, -1.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& s = samples[static_cast<std::size_t>(i)];
        if (s.features.size() != d)
            throw DataError("inconsistent feature count in grade corpus");
        for (std::size_t j = 0; j < d; ++j) {
            if (!std::isfinite(s.features[j]))
                throw NumericalError("non-finite text feature");
            x(i, static_cast<Eigen::Index>(j)) = s.features[j];
        }
        const auto label = static_cast<std::size_t>(s.label);
        y(i, static_cast<Eigen::Index>(label)) = 1.0;
        c.present_[label] = true;
    }
    if (std::count(c.present_.begin(), c.present_.end(), true) < 2)
        throw DataError("grade classifier needs at least 2 classes");

    c.gamma_ = gamma > 0.0 ? gamma : 1.0 / static_cast<double>(d);
    c.standardizer_ = fit_standardizer(x);
    c.support_ = c.standardizer_.apply(x);

    const Eigen::VectorXd sq = c.support_.rowwise().squaredNorm();
    Eigen::MatrixXd dist = (sq.replicate(1, n) + sq.transpose().replicate(n, 1)) - 2.0 * c.support_ * c.support_.transpose();
    Eigen::MatrixXd k = (-c.gamma_ * dist.cwiseMax(0.0)).array().exp().matrix();
    k.diagonal().array() += lambda;
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success)
        throw NumericalError("kernel system is not positive definite");
    c.coeffs_ = llt.solve(y);
    return c;
}

Eigen::MatrixXd GradeClassifier::scores(const std::vector<std::vector<double>>& x) const
{
    const auto m = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd out(m, kGradeCount);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& row = x[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(row.size()) != support_.cols())
            throw DataError("feature count does not match the classifier");
        const Eigen::VectorXd z = standardizer_.apply(std::span<const double>(row));
        const Eigen::VectorXd kv =
            (-gamma_ * (support_.rowwise() - z.transpose()).rowwise().squaredNorm()).array().exp().matrix();
        out.row(i) = kv.transpose() * coeffs_;
        for (std::size_t c = 0; c < kGradeCount; ++c)
            if (!present_[c])
                out(i, static_cast<Eigen::Index>(c)) = -std::numeric_limits<double>::infinity();
    }
    return out;
}

GradeLabel GradeClassifier::predict(const std::vector<double>& x) const
{
    const Eigen::MatrixXd s = scores({x});
    std::size_t best = 0;
    for (std::size_t c = 1; c < kGradeCount; ++c)
        if (s(0, static_cast<Eigen::Index>(c)) > s(0, static_cast<Eigen::Index>(best)))
            best = c;
    return static_cast<GradeLabel>(best);
}

double macro_f1(const std::vector<GradeLabel>& gold, const std::vector<GradeLabel>& pred)
{
    if (gold.size() != pred.size() || gold.empty())
        throw DataError("macro_f1: label vectors must be non-empty and of equal length");
    double sum = 0.0;
    std::size_t classes = 0;
    for (std::size_t c = 0; c < kGradeCount; ++c) {
        const auto label = static_cast<GradeLabel>(c);
        std::size_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < gold.size(); ++i) {
            const bool g = gold[i] == label;
            const bool p = pred[i] == label;
            tp += g && p;
            fp += !g && p;
            fn += g && !p;
        }
        if (tp + fn == 0)
            continue;
        ++classes;
        if (tp == 0)
            continue;
        const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
        sum += 2.0 * precision * recall / (precision + recall);
    }
    return sum / static_cast<double>(classes);
}

std::vector<FeatureSubset> default_feature_subsets()
{
    auto pair = [](std::string_view id) {
        return std::vector<std::string>{"mean_" + std::string(id), "std_" + std::string(id)};
    };
    std::vector<std::string> all;
    for (auto p : kAllProperties)
        for (auto& f : pair(property_id(p)))
            all.push_back(f);
    return {
        {"Flesch", {"flesch_bp"}},
        {"Honore", {"honore"}},
        {"Concreteness", pair("concreteness")},
        {"Imageability", pair("imageability")},
        {"AoA", pair("aoa")},
        {"Dale-Chall", {"dale_chall"}},
        {"Gunning Fog", {"gunning_fog"}},
        {"Subjective Frequency", pair("subj_frequency")},
        {"Psycholinguistics", all},
        {"MATTR", {"mattr"}},
        {"Brunet", {"brunet"}},
    };
}

std::vector<LabeledSample> select_features(const std::vector<LabeledText>& corpus, const std::vector<std::string>& names)
{
    std::vector<LabeledSample> out;
    out.reserve(corpus.size());
    for (const auto& t : corpus) {
        LabeledSample s{{}, t.label};
        for (const auto& name : names) {
            auto it = t.features.find(name);
            if (it == t.features.end())
                throw DataError("text is missing feature '" + name + "'");
            s.features.push_back(it->second);
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<SubsetScore> evaluate_features(const std::vector<LabeledText>& corpus,
                                           const std::vector<FeatureSubset>& subsets,
                                           const ClassifierSettings& settings)
{
    const FoldPlan plan = make_folds(corpus.size(), settings.folds, 1, settings.seed);
    std::vector<SubsetScore> out;
    for (const auto& subset : subsets) {
        const auto samples = select_features(corpus, subset.features);
        std::vector<GradeLabel> gold, pred;
        for (std::size_t f = 0; f < plan.k; ++f) {
            std::vector<LabeledSample> train;
            for (auto i : plan.train_indices(0, f))
                train.push_back(samples[i]);

            std::array<std::size_t, kGradeCount> counts{};
            for (const auto& s : train)
                ++counts[static_cast<std::size_t>(s.label)];
            const bool single_class = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) < 2;

            std::optional<GradeClassifier> clf;
            if (!single_class)
                clf = GradeClassifier::train(train, settings.gamma, settings.lambda);
            const auto only = static_cast<GradeLabel>(std::max_element(counts.begin(), counts.end()) - counts.begin());
            for (auto i : plan.test_folds[0][f]) {
                gold.push_back(samples[i].label);
                pred.push_back(clf ? clf->predict(samples[i].features) : only);
            }
        }
        out.push_back({subset.name, macro_f1(gold, pred)});
    }
    return out;
}

} // namespace psynorms
