#include "psynorms/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "psynorms/error.hpp"
#include "psynorms/textio.hpp"

extern char** environ;

namespace psynorms {

const Settings& default_settings()
{
    static const Settings defaults = {
        {"data.prepared_dir", "prepared"},
        {"data.models_dir", "models"},
        {"data.out", "out"},

        {"prepare.concreteness", ""},
        {"prepare.aoa", ""},
        {"prepare.imageability", ""},
        {"prepare.subj_frequency", ""},
        {"prepare.orthography", "starter"},
        {"prepare.target_scale", "1-7"},

        {"features.subtlex", ""},
        {"features.subimdb", ""},
        {"features.written", ""},
        {"features.spoken", ""},
        {"features.mixed", ""},
        {"features.grades", ""},
        {"features.embedding_a", ""},
        {"features.embedding_b", ""},

        // Default views per property.
        {"regression.lambda", "1"},
        {"regression.views_concreteness", "embedding_a+embedding_b"},
        {"regression.views_aoa", "lexical+embedding_b"},
        {"regression.views_imageability", "embedding_a+embedding_b"},
        {"regression.views_subj_frequency", "lexical+embedding_a+embedding_b"},

        {"eval.seed", "42"},
        {"eval.k", "5"},
        {"eval.reps", "20"},
        {"eval.combos", ""},

        {"lexicon.dictionary", ""},
        {"lexicon.loanwords", ""},
        {"lexicon.frequency", ""},
        {"lexicon.min_count", "8"},
        {"lexicon.file", ""},

        {"readability.easy_words", ""},
        {"readability.corpus_dir", ""},
        {"readability.manifest", ""},
        {"readability.mattr_window", "50"},
        {"readability.gamma", "0"},
        {"readability.lambda", "0.1"},
        {"readability.folds", "10"},

        {"alpha.reference", ""},
        {"alpha.scale", "1-7"},
    };
    return defaults;
}

void overlay(Settings& base, const Settings& overrides)
{
    const auto& known = default_settings();
    for (const auto& [key, value] : overrides) {
        if (!known.contains(key))
            throw UsageError("unknown configuration key '" + key + "'");
        base[key] = value;
    }
}

Settings read_settings_file(const std::filesystem::path& path)
{
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(path.string(), tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
    Settings out;
    for (const auto& [section, entries] : tree) {
        if (entries.empty() && !entries.data().empty())
            throw UsageError("config " + path.string() + ": key '" + section + "' outside a section");
        for (const auto& [key, node] : entries)
            out[section + "." + key] = std::string(textio::trim(node.data()));
    }
    Settings checked;
    overlay(checked, out);
    return checked;
}

Settings settings_from_environment()
{
    constexpr std::string_view prefix = "PSYNORMS_";
    Settings out;
    for (char** env = environ; env != nullptr && *env != nullptr; ++env) {
        std::string_view entry(*env);
        if (!entry.starts_with(prefix))
            continue;
        const auto eq = entry.find('=');
        if (eq == std::string_view::npos)
            continue;
        std::string name(entry.substr(prefix.size(), eq - prefix.size()));
        std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        const auto sep = name.find('_');
        if (sep == std::string::npos)
            continue;
        out[name.substr(0, sep) + "." + name.substr(sep + 1)] = std::string(entry.substr(eq + 1));
    }
    return out;
}

ViewSet parse_view_set(std::string_view text)
{
    ViewSet views;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('+', start);
        if (end == std::string_view::npos)
            end = text.size();
        const auto part = textio::trim(text.substr(start, end - start));
        if (part.empty())
            throw UsageError("empty view name in '" + std::string(text) + "'");
        if (!views.insert(parse_view(part)).second)
            throw UsageError("view listed twice in '" + std::string(text) + "'");
        start = end + 1;
    }
    return views;
}

std::string view_set_id(const ViewSet& views)
{
    std::string out;
    for (ViewKind v : views) {
        if (!out.empty())
            out += "+";
        out += view_id(v);
    }
    return out;
}

namespace {

std::vector<std::string> split_list(std::string_view text, char sep)
{
    std::vector<std::string> out;
    if (textio::trim(text).empty())
        return out;
    for (auto& part : textio::split_record(text, sep))
        out.emplace_back(textio::trim(part));
    return out;
}

std::optional<std::filesystem::path> optional_path(const Settings& s, const std::string& key)
{
    const auto& v = s.at(key);
    if (v.empty())
        return std::nullopt;
    return std::filesystem::path(v);
}

double real_setting(const Settings& s, const std::string& key)
{
    double v = 0;
    if (!textio::parse_double(s.at(key), v))
        throw UsageError("configuration '" + key + "' must be a number, got '" + s.at(key) + "'");
    return v;
}

std::uint64_t count_setting(const Settings& s, const std::string& key)
{
    long long v = 0;
    if (!textio::parse_int64(s.at(key), v) || v < 0)
        throw UsageError("configuration '" + key + "' must be a non-negative integer, got '" + s.at(key) + "'");
    return static_cast<std::uint64_t>(v);
}

LikertScale scale_setting(const std::string& key, std::string_view text)
{
    try {
        return LikertScale::parse(text);
    } catch (const DataError& e) {
        throw UsageError("configuration '" + key + "': " + e.what());
    }
}

} // namespace

RunConfig resolve_config(const Settings& settings)
{
    Settings s = default_settings();
    overlay(s, settings);

    RunConfig c;
    c.resolved = s;
    c.prepared_dir = s.at("data.prepared_dir");
    c.models_dir = s.at("data.models_dir");
    c.out_dir = s.at("data.out");

    for (auto p : kAllProperties) {
        const std::string key = "prepare." + std::string(property_id(p));
        for (const auto& item : split_list(s.at(key), ',')) {
            // path[@min-max]; the scale defaults to 1-7
            const auto at = item.rfind('@');
            if (at == std::string::npos)
                c.sources[p].push_back({item, LikertScale(1.0, 7.0)});
            else
                c.sources[p].push_back({item.substr(0, at), scale_setting(key, item.substr(at + 1))});
        }
    }
    c.orthography = s.at("prepare.orthography");
    if (c.orthography.empty())
        c.orthography = "none";
    c.target_scale = scale_setting("prepare.target_scale", s.at("prepare.target_scale"));

    c.subtlex = optional_path(s, "features.subtlex");
    c.subimdb = optional_path(s, "features.subimdb");
    c.written = optional_path(s, "features.written");
    c.spoken = optional_path(s, "features.spoken");
    c.mixed = optional_path(s, "features.mixed");
    for (const auto& g : split_list(s.at("features.grades"), ','))
        c.grades.emplace_back(g);
    if (!c.grades.empty() && c.grades.size() != 6)
        throw UsageError("features.grades must list 6 files in grade order, got " + std::to_string(c.grades.size()));
    c.embedding_a = optional_path(s, "features.embedding_a");
    c.embedding_b = optional_path(s, "features.embedding_b");

    c.lambda = real_setting(s, "regression.lambda");
    if (!(c.lambda >= 0.0))
        throw UsageError("regression.lambda must be non-negative");
    for (auto p : kAllProperties)
        c.views[p] = parse_view_set(s.at("regression.views_" + std::string(property_id(p))));

    c.seed = count_setting(s, "eval.seed");
    c.k = count_setting(s, "eval.k");
    c.reps = count_setting(s, "eval.reps");
    if (c.k < 2 || c.reps < 1)
        throw UsageError("eval.k must be >= 2 and eval.reps >= 1");
    if (!s.at("eval.combos").empty()) {
        std::vector<ViewSet> combos;
        for (const auto& item : split_list(s.at("eval.combos"), ';'))
            combos.push_back(parse_view_set(item));
        c.combos = std::move(combos);
    }

    c.dictionary = optional_path(s, "lexicon.dictionary");
    c.loanwords = optional_path(s, "lexicon.loanwords");
    c.lexicon_frequency = optional_path(s, "lexicon.frequency");
    c.min_count = count_setting(s, "lexicon.min_count");
    c.lexicon_path = s.at("lexicon.file").empty() ? c.out_dir / "lexicon.csv" : std::filesystem::path(s.at("lexicon.file"));

    c.easy_words = optional_path(s, "readability.easy_words");
    c.corpus_dir = optional_path(s, "readability.corpus_dir");
    c.manifest = optional_path(s, "readability.manifest");
    c.mattr_window = count_setting(s, "readability.mattr_window");
    if (c.mattr_window == 0)
        throw UsageError("readability.mattr_window must be positive");
    c.gamma = real_setting(s, "readability.gamma");
    c.classifier_lambda = real_setting(s, "readability.lambda");
    if (!(c.classifier_lambda > 0.0))
        throw UsageError("readability.lambda must be positive");
    c.folds = count_setting(s, "readability.folds");
    if (c.folds < 2)
        throw UsageError("readability.folds must be >= 2");

    c.alpha_reference = optional_path(s, "alpha.reference");
    c.alpha_scale = scale_setting("alpha.scale", s.at("alpha.scale"));
    return c;
}

nlohmann::json RunConfig::to_json() const
{
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [key, value] : resolved)
        j[key] = value;
    return j;
}

} // namespace psynorms
