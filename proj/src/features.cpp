#include "psynorms/features.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "psynorms/error.hpp"
#include "psynorms/textio.hpp"
#include "psynorms/unicode.hpp"

namespace psynorms {

std::string_view view_id(ViewKind v)
{
    switch (v) {
    case ViewKind::Lexical: return "lexical";
    case ViewKind::EmbeddingA: return "embedding_a";
    case ViewKind::EmbeddingB: return "embedding_b";
    }
    return "?";
}

std::string_view view_label(ViewKind v)
{
    switch (v) {
    case ViewKind::Lexical: return "Lexical";
    case ViewKind::EmbeddingA: return "Skip-gram";
    case ViewKind::EmbeddingB: return "GloVe";
    }
    return "?";
}

ViewKind parse_view(std::string_view id)
{
    if (id == "lexical")
        return ViewKind::Lexical;
    if (id == "embedding_a" || id == "skipgram" || id == "skip-gram")
        return ViewKind::EmbeddingA;
    if (id == "embedding_b" || id == "glove")
        return ViewKind::EmbeddingB;
    throw UsageError("unknown view '" + std::string(id) + "' (expected lexical, embedding_a or embedding_b)");
}

std::uint64_t FrequencyList::count(std::string_view word) const
{
    auto it = counts.find(std::string(word));
    return it == counts.end() ? 0 : it->second;
}

std::uint64_t FrequencyList::diversity_count(std::string_view word) const
{
    auto it = diversity.find(std::string(word));
    return it == diversity.end() ? 0 : it->second;
}

FrequencyList load_frequency_list(const std::filesystem::path& path, std::string name)
{
    const auto lines = textio::read_lines(path);
    const std::string file = path.string();

    FrequencyList fl;
    fl.name = std::move(name);
    std::optional<std::uint64_t> declared_total;
    std::uint64_t sum = 0;
    std::uint64_t max_count = 0;

    auto parse_count = [&](std::string_view field, std::size_t line) {
        long long v = 0;
        if (!textio::parse_int64(field, v))
            throw DataError(file, line, "malformed count '" + std::string(field) + "'");
        if (v < 0)
            throw DataError(file, line, "negative count " + std::to_string(v));
        return static_cast<std::uint64_t>(v);
    };

    for (const auto& line : lines) {
        const auto text = textio::trim(line.text);
        if (text.empty())
            continue;
        if (text.front() == '#') {
            if (text.starts_with("#total=")) {
                declared_total = parse_count(text.substr(7), line.number);
            }
            continue;
        }
        const auto fields = textio::split_record(line.text, '\t');
        if (fields.size() < 2 || fields.size() > 3)
            throw DataError(file, line.number, "expected word<TAB>count[<TAB>diversity]");
        std::string word;
        try {
            word = unicode::normalize_word(fields[0]);
        } catch (const DataError& e) {
            throw DataError(file, line.number, e.what());
        }
        if (word.empty())
            throw DataError(file, line.number, "empty word");
        const auto c = parse_count(fields[1], line.number);
        const auto d = fields.size() == 3 ? parse_count(fields[2], line.number) : 0;
        // Case variants fold onto one normalized form; their counts add up.
        if (c > 0) {
            auto& slot = fl.counts[word];
            slot += c;
            max_count = std::max(max_count, slot);
        }
        if (d > 0)
            fl.diversity[word] += d;
        sum += c;
    }

    if (declared_total) {
        if (*declared_total < max_count)
            throw DataError(file + ": declared #total=" + std::to_string(*declared_total) +
                            " is below the largest count " + std::to_string(max_count));
        fl.total_tokens = *declared_total;
    } else {
        fl.total_tokens = sum;
    }
    return fl;
}

double log_frequency(const FrequencyList& fl, std::string_view word)
{
    return std::log(static_cast<double>(fl.count(word)) + 1.0);
}

double log_diversity(const FrequencyList& fl, std::string_view word)
{
    return std::log(static_cast<double>(fl.diversity_count(word)) + 1.0);
}

GradeLexicons load_grade_lexicons(std::span<const std::filesystem::path> paths)
{
    GradeLexicons grades;
    if (paths.size() != grades.per_grade.size())
        throw UsageError("expected 6 grade lexicon files, got " + std::to_string(paths.size()));
    for (std::size_t i = 0; i < paths.size(); ++i)
        grades.per_grade[i] = textio::load_word_set(paths[i]);
    return grades;
}

FeatureVector lexical_view(std::string_view word, const LexicalSources& sources, const GradeLexicons& grades)
{
    FeatureVector fv{ViewKind::Lexical, {}};
    fv.values.reserve(kLexicalDimension);
    fv.values.push_back(log_frequency(sources.subtlex, word));
    fv.values.push_back(log_diversity(sources.subtlex, word));
    fv.values.push_back(log_frequency(sources.subimdb, word));
    fv.values.push_back(log_frequency(sources.written, word));
    fv.values.push_back(log_frequency(sources.spoken, word));
    fv.values.push_back(log_frequency(sources.mixed, word));
    fv.values.push_back(static_cast<double>(unicode::scalar_count(word)));
    const std::string key(word);
    for (const auto& grade : grades.per_grade)
        fv.values.push_back(grade.contains(key) ? 1.0 : 0.0);
    return fv;
}

EmbeddingModel::EmbeddingModel(ViewKind kind, std::size_t dimension) : kind_(kind), dimension_(dimension)
{
    if (kind == ViewKind::Lexical)
        throw UsageError("an embedding model cannot back the lexical view");
    if (dimension == 0)
        throw DataError("embedding dimension must be positive");
}

bool EmbeddingModel::add(std::string word, std::span<const double> values)
{
    if (values.size() != dimension_)
        throw DataError("vector for '" + word + "' has " + std::to_string(values.size()) + " components, expected " +
                        std::to_string(dimension_));
    for (double v : values)
        if (!std::isfinite(v) || !std::isfinite(static_cast<float>(v)))
            throw DataError("non-finite component in vector for '" + word + "'");
    if (index_.contains(word))
        return false;
    index_.emplace(word, words_.size());
    words_.push_back(std::move(word));
    for (double v : values)
        data_.push_back(static_cast<float>(v));
    return true;
}

std::optional<std::span<const float>> EmbeddingModel::find(std::string_view word) const
{
    auto it = index_.find(std::string(word));
    if (it == index_.end())
        return std::nullopt;
    return std::span<const float>(data_.data() + it->second * dimension_, dimension_);
}

namespace {

std::vector<std::string_view> split_spaces(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
            ++i;
        const auto start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t')
            ++i;
        if (i > start)
            out.push_back(s.substr(start, i - start));
    }
    return out;
}

} // namespace

EmbeddingModel load_embeddings(const std::filesystem::path& path, ViewKind kind)
{
    if (kind == ViewKind::Lexical)
        throw UsageError("load_embeddings: kind must be an embedding view");
    const auto lines = textio::read_lines(path);
    const std::string file = path.string();

    std::optional<EmbeddingModel> model;
    std::vector<double> values;
    bool first = true;
    for (const auto& line : lines) {
        const auto tokens = split_spaces(line.text);
        if (tokens.empty())
            continue;
        if (first) {
            first = false;
            long long vocab = 0, dim = 0;
            if (tokens.size() == 2 && textio::parse_int64(tokens[0], vocab) && textio::parse_int64(tokens[1], dim) &&
                vocab >= 0 && dim > 0) {
                model.emplace(kind, static_cast<std::size_t>(dim));
                continue;
            }
            if (tokens.size() < 2)
                throw DataError(file, line.number, "embedding row has no values");
            model.emplace(kind, tokens.size() - 1);
        }
        if (tokens.size() - 1 != model->dimension())
            throw DataError(file, line.number,
                            "expected " + std::to_string(model->dimension()) + " values, found " +
                                std::to_string(tokens.size() - 1));
        values.clear();
        for (std::size_t i = 1; i < tokens.size(); ++i) {
            double v = 0;
            if (!textio::parse_double(tokens[i], v))
                throw DataError(file, line.number, "malformed or non-finite value '" + std::string(tokens[i]) + "'");
            values.push_back(v);
        }
        std::string word;
        try {
            word = unicode::normalize_word(tokens[0]);
            if (!model->add(std::move(word), values))
                model->note_duplicate();
        } catch (const DataError& e) {
            throw DataError(file, line.number, e.what());
        }
    }
    if (!model)
        throw DataError(file + ": empty embedding file");
    return std::move(*model);
}

void write_embeddings(const EmbeddingModel& model, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write file: " + path.string());
    out << model.size() << ' ' << model.dimension() << '\n';
    for (const auto& w : model.words()) {
        out << w;
        const auto vec = *model.find(w);
        for (float v : vec) {
            char buf[32];
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
            out << ' ' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
        }
        out << '\n';
    }
    if (!out)
        throw DataError("write failed: " + path.string());
}

std::optional<FeatureVector> embedding_view(std::string_view word, const EmbeddingModel& model)
{
    auto vec = model.find(word);
    if (!vec)
        return std::nullopt;
    return FeatureVector{model.kind(), std::vector<double>(vec->begin(), vec->end())};
}

const EmbeddingModel* FeatureResources::embedding(ViewKind v) const
{
    switch (v) {
    case ViewKind::EmbeddingA: return embedding_a ? &*embedding_a : nullptr;
    case ViewKind::EmbeddingB: return embedding_b ? &*embedding_b : nullptr;
    case ViewKind::Lexical: return nullptr;
    }
    return nullptr;
}

std::size_t FeatureResources::dimension(ViewKind v) const
{
    if (v == ViewKind::Lexical)
        return kLexicalDimension;
    const auto* m = embedding(v);
    if (m == nullptr)
        throw DataError("no embedding model loaded for view " + std::string(view_id(v)));
    return m->dimension();
}

std::optional<FeatureVector> view_features(const FeatureResources& res, ViewKind v, std::string_view word)
{
    if (v == ViewKind::Lexical)
        return lexical_view(word, res.lexical, res.grades);
    const auto* m = res.embedding(v);
    if (m == nullptr)
        throw DataError("no embedding model loaded for view " + std::string(view_id(v)));
    return embedding_view(word, *m);
}

} // namespace psynorms
