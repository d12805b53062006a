#include "psynorms/commands.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "psynorms/error.hpp"
#include "psynorms/textio.hpp"

namespace psynorms {

namespace {

using nlohmann::json;

void require_file(const std::filesystem::path& p, std::string_view what)
{
    if (!std::filesystem::is_regular_file(p))
        throw DataError(std::string(what) + " not found: " + p.string());
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write file: " + path.string());
    out << text;
    if (!out)
        throw DataError("write failed: " + path.string());
}

void write_json(const std::filesystem::path& path, const json& j)
{
    write_text(path, j.dump(2) + "\n");
}

FrequencyList optional_frequency(const std::optional<std::filesystem::path>& path, std::string name)
{
    if (!path) {
        FrequencyList fl;
        fl.name = std::move(name);
        return fl;
    }
    require_file(*path, "frequency list");
    return load_frequency_list(*path, std::move(name));
}

std::filesystem::path prepared_path(const RunConfig& cfg, PropertyKind p)
{
    return cfg.prepared_dir / (std::string(property_id(p)) + ".csv");
}

std::filesystem::path model_path(const RunConfig& cfg, PropertyKind p)
{
    return cfg.models_dir / (std::string(property_id(p)) + ".json");
}

OrthographyMap resolve_orthography(const RunConfig& cfg)
{
    if (cfg.orthography == "none")
        return {};
    if (cfg.orthography == "starter")
        return starter_orthography_map();
    require_file(cfg.orthography, "orthography map");
    return load_orthography_map(cfg.orthography);
}

LexiconLookup load_lexicon_lookup(const RunConfig& cfg)
{
    require_file(cfg.lexicon_path, "lexicon");
    return make_lookup(read_lexicon(cfg.lexicon_path));
}

TextFeatures text_features(const std::string& text, const std::unordered_set<std::string>& easy,
                           const LexiconLookup& lexicon, std::size_t window, PsycholinguisticFeatures* psy_out = nullptr)
{
    const TextProfile profile = profile_text(text);
    TextFeatures f = classic_formulas(profile, easy, window);
    auto psy = psycholinguistic_features(profile, lexicon);
    f.insert(psy.values.begin(), psy.values.end());
    if (psy_out != nullptr)
        *psy_out = std::move(psy);
    return f;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

FeatureResources load_resources(const RunConfig& cfg, const std::set<ViewKind>& views)
{
    FeatureResources res;
    res.lexical.subtlex = optional_frequency(cfg.subtlex, "subtlex");
    res.lexical.subimdb = optional_frequency(cfg.subimdb, "subimdb");
    res.lexical.written = optional_frequency(cfg.written, "written");
    res.lexical.spoken = optional_frequency(cfg.spoken, "spoken");
    res.lexical.mixed = optional_frequency(cfg.mixed, "mixed");
    if (!cfg.grades.empty()) {
        for (const auto& g : cfg.grades)
            require_file(g, "grade lexicon");
        res.grades = load_grade_lexicons(cfg.grades);
    }
    if (views.contains(ViewKind::EmbeddingA)) {
        if (!cfg.embedding_a)
            throw UsageError("view embedding_a requested but features.embedding_a is not configured");
        require_file(*cfg.embedding_a, "embedding file");
        res.embedding_a = load_embeddings(*cfg.embedding_a, ViewKind::EmbeddingA);
    }
    if (views.contains(ViewKind::EmbeddingB)) {
        if (!cfg.embedding_b)
            throw UsageError("view embedding_b requested but features.embedding_b is not configured");
        require_file(*cfg.embedding_b, "embedding file");
        res.embedding_b = load_embeddings(*cfg.embedding_b, ViewKind::EmbeddingB);
    }
    return res;
}

PrepareResult cmd_prepare(const RunConfig& cfg, std::ostream& log)
{
    if (cfg.sources.empty())
        throw UsageError("no norm sources configured (prepare.<property> = path@scale, ...)");
    const OrthographyMap map = resolve_orthography(cfg);

    PrepareResult result;
    json provenance;
    provenance["configuration"] = cfg.to_json();
    provenance["orthography"] = {{"map", cfg.orthography},
                                 {"replacements", map.replacements().size()},
                                 {"discards", map.discards().size()}};
    std::filesystem::create_directories(cfg.prepared_dir);

    for (const auto& [property, sources] : cfg.sources) {
        json steps = json::array();
        std::optional<NormDataset> merged;
        for (const auto& src : sources) {
            require_file(src.path, "norms file");
            const NormDataset raw = load_norms(src.path, property, src.scale);
            const NormDataset adapted = apply_orthography(raw, map);
            const NormDataset converted = convert_scale(adapted, cfg.target_scale);
            json step = {{"source", src.path.string()},
                         {"scale", textio::format_double(src.scale.min()) + "-" + textio::format_double(src.scale.max())},
                         {"loaded", raw.size()},
                         {"after_orthography", adapted.size()},
                         {"after_conversion", converted.size()}};
            if (merged) {
                const std::size_t before = merged->size();
                merged = merge_datasets(*merged, converted);
                step["merged_rows_before"] = before;
                step["merged_rows_after"] = merged->size();
            } else {
                merged = converted;
            }
            steps.push_back(std::move(step));
        }
        const auto out = prepared_path(cfg, property);
        write_norms(*merged, out);
        result.rows[property] = merged->size();
        provenance["properties"][std::string(property_id(property))] = {
            {"steps", steps}, {"rows", merged->size()}, {"output", out.string()}};
        log << property_id(property) << ": " << merged->size() << " words -> " << out.string() << "\n";
    }
    result.log_path = cfg.prepared_dir / "prepare_log.json";
    write_json(result.log_path, provenance);
    return result;
}

MultiViewModel cmd_train(const RunConfig& cfg, PropertyKind property, std::ostream& log)
{
    const auto norms_path = prepared_path(cfg, property);
    require_file(norms_path, "prepared norms");
    const ViewSet& views = cfg.views.at(property);
    const FeatureResources res = load_resources(cfg, views);
    const NormDataset data = load_norms(norms_path, property, cfg.target_scale);

    MultiViewModel model = train_multiview(property, data, views, res, cfg.lambda);
    std::filesystem::create_directories(cfg.models_dir);
    const auto out = model_path(cfg, property);
    save_model(model, out);

    log << property_id(property) << ": " << data.size() << " rated words, lambda " << cfg.lambda << "\n";
    for (const auto& sm : model.submodels)
        log << "  " << std::left << std::setw(12) << view_id(sm.view) << sm.training_rows << " training rows, "
            << sm.weights.size() << " features\n";
    log << "model -> " << out.string() << "\n";
    return model;
}

EvalReport cmd_eval(const RunConfig& cfg, PropertyKind property, std::ostream& log)
{
    const auto norms_path = prepared_path(cfg, property);
    require_file(norms_path, "prepared norms");

    std::vector<ViewSet> combos;
    if (cfg.combos) {
        combos = *cfg.combos;
    } else {
        for (auto& c : all_view_combinations()) {
            const bool available = (!c.contains(ViewKind::EmbeddingA) || cfg.embedding_a) &&
                                   (!c.contains(ViewKind::EmbeddingB) || cfg.embedding_b);
            if (available)
                combos.push_back(c);
        }
    }
    ViewSet needed;
    for (const auto& c : combos)
        needed.insert(c.begin(), c.end());

    const FeatureResources res = load_resources(cfg, needed);
    const NormDataset data = load_norms(norms_path, property, cfg.target_scale);
    const FoldPlan plan = make_folds(data.size(), cfg.k, cfg.reps, cfg.seed);
    EvalReport report = cross_validate(property, data, res, combos, plan, cfg.lambda);

    json j = to_json(report);
    j["configuration"]["run"] = cfg.to_json();
    const std::string stem = "eval_" + std::string(property_id(property));
    write_json(cfg.out_dir / (stem + ".json"), j);
    const std::string table = render_table(report);
    write_text(cfg.out_dir / (stem + ".txt"), table);
    log << table;
    return report;
}

LexiconBuild cmd_build_lexicon(const RunConfig& cfg, std::ostream& log)
{
    if (!cfg.dictionary)
        throw UsageError("lexicon.dictionary is not configured");
    require_file(*cfg.dictionary, "dictionary");
    const auto entries = load_dictionary(*cfg.dictionary);

    std::unordered_set<std::string> loanwords;
    if (cfg.loanwords) {
        require_file(*cfg.loanwords, "loanword list");
        loanwords = textio::load_word_set(*cfg.loanwords);
    }

    std::map<PropertyKind, MultiViewModel> models;
    ViewSet needed;
    for (auto p : kAllProperties) {
        const auto path = model_path(cfg, p);
        require_file(path, "model for " + std::string(property_id(p)));
        auto m = load_model(path);
        for (ViewKind v : m.views())
            needed.insert(v);
        models.emplace(p, std::move(m));
    }
    const FeatureResources res = load_resources(cfg, needed);

    const auto freq_path = cfg.lexicon_frequency ? cfg.lexicon_frequency : cfg.mixed;
    if (!freq_path)
        throw UsageError("lexicon.frequency (or features.mixed) is not configured");
    const FrequencyList freq = freq_path == cfg.mixed ? res.lexical.mixed : optional_frequency(freq_path, "lexicon");

    LexiconBuild build = build_lexicon(entries, loanwords, freq, cfg.min_count, models, res);
    write_lexicon(build.entries, cfg.lexicon_path);

    json counts = json::object();
    for (const auto& [pos, n] : build.pos_counts)
        counts[std::string(pos_id(pos))] = n;
    write_json(cfg.out_dir / "lexicon_report.json",
               {{"configuration", cfg.to_json()},
                {"dictionary_entries", entries.size()},
                {"lexicon_size", build.entries.size()},
                {"pos_counts", counts}});

    log << build.entries.size() << " words";
    for (const auto& [pos, n] : build.pos_counts)
        log << ", " << n << " " << pos_id(pos);
    log << " -> " << cfg.lexicon_path.string() << "\n";
    return build;
}

TextFeatures cmd_readability_text(const RunConfig& cfg, const std::filesystem::path& text, std::ostream& log)
{
    require_file(text, "text");
    std::unordered_set<std::string> easy;
    if (cfg.easy_words) {
        require_file(*cfg.easy_words, "easy word list");
        easy = textio::load_word_set(*cfg.easy_words);
    }
    const auto lexicon = load_lexicon_lookup(cfg);
    PsycholinguisticFeatures psy;
    const TextFeatures f = text_features(read_file(text), easy, lexicon, cfg.mattr_window, &psy);

    json j = {{"configuration", cfg.to_json()},
              {"text", text.string()},
              {"features", f},
              {"lexicon_coverage", psy.covered},
              {"uncovered", psy.uncovered}};
    write_json(cfg.out_dir / ("readability_" + text.stem().string() + ".json"), j);
    for (const auto& [name, value] : f)
        log << std::left << std::setw(24) << name << value << "\n";
    if (psy.uncovered)
        log << "warning: no token of the text is in the lexicon; psycholinguistic features set to 4.0\n";
    return f;
}

std::vector<SubsetScore> cmd_readability_corpus(const RunConfig& cfg, std::ostream& log)
{
    if (!cfg.manifest)
        throw UsageError("readability.manifest is not configured");
    require_file(*cfg.manifest, "corpus manifest");
    const auto dir = cfg.corpus_dir ? *cfg.corpus_dir : cfg.manifest->parent_path();

    std::unordered_set<std::string> easy;
    if (cfg.easy_words) {
        require_file(*cfg.easy_words, "easy word list");
        easy = textio::load_word_set(*cfg.easy_words);
    }
    const auto lexicon = load_lexicon_lookup(cfg);

    std::vector<LabeledText> corpus;
    const auto lines = textio::read_lines(*cfg.manifest);
    const std::string file = cfg.manifest->string();
    bool header_seen = false;
    for (const auto& line : lines) {
        if (textio::trim(line.text).empty())
            continue;
        const auto fields = textio::split_record(line.text);
        if (!header_seen) {
            header_seen = true;
            if (fields.size() == 2 && textio::trim(fields[0]) == "file" && textio::trim(fields[1]) == "grade")
                continue;
            throw DataError(file, line.number, "expected header 'file,grade'");
        }
        if (fields.size() != 2)
            throw DataError(file, line.number, "expected 2 fields (file,grade)");
        const auto path = dir / std::string(textio::trim(fields[0]));
        try {
            require_file(path, "corpus text");
            corpus.push_back({text_features(read_file(path), easy, lexicon, cfg.mattr_window),
                              parse_grade(textio::trim(fields[1]))});
        } catch (const DataError& e) {
            throw DataError(file, line.number, e.what());
        }
    }

    ClassifierSettings settings{cfg.gamma, cfg.classifier_lambda, cfg.folds, cfg.seed};
    const auto scores = evaluate_features(corpus, default_feature_subsets(), settings);

    std::array<std::size_t, kGradeCount> per_grade{};
    for (const auto& t : corpus)
        ++per_grade[static_cast<std::size_t>(t.label)];
    json grades = json::object();
    for (std::size_t g = 0; g < kGradeCount; ++g)
        grades[std::string(grade_id(static_cast<GradeLabel>(g)))] = per_grade[g];
    json rows = json::array();
    for (const auto& s : scores)
        rows.push_back({{"subset", s.name}, {"macro_f1", s.f1}});
    write_json(cfg.out_dir / "readability_eval.json",
               {{"configuration", cfg.to_json()},
                {"classifier", "one-vs-rest kernel regularized least squares, Gaussian kernel (SVM substitute)"},
                {"texts", corpus.size()},
                {"grades", grades},
                {"results", rows}});

    std::ostringstream table;
    table << "Grade-level classification, " << cfg.folds << "-fold CV, macro-F1 (" << corpus.size() << " texts)\n";
    for (const auto& s : scores)
        table << std::left << std::setw(24) << s.name << std::fixed << std::setprecision(4) << s.f1 << "\n";
    write_text(cfg.out_dir / "readability_eval.txt", table.str());
    log << table.str();
    return scores;
}

CorrelationMatrix cmd_corr(const RunConfig& cfg, std::ostream& log)
{
    require_file(cfg.lexicon_path, "lexicon");
    const auto lexicon = read_lexicon(cfg.lexicon_path);
    const auto m = property_correlations(lexicon);

    json matrix = json::object();
    json pairs = json::array();
    for (auto a : kAllProperties)
        for (auto b : kAllProperties) {
            const auto& v = m[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
            matrix[std::string(property_id(a))][std::string(property_id(b))] = v ? json(*v) : json(nullptr);
        }
    std::ostringstream table;
    table << "Pearson correlations among properties (" << lexicon.size() << " words)\n";
    for (auto [a, b] : correlation_report_pairs()) {
        const auto& v = m[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
        const std::string label = std::string(property_label(a)) + " vs " + std::string(property_label(b));
        pairs.push_back({{"pair", label}, {"pearson", v ? json(*v) : json(nullptr)}});
        table << std::left << std::setw(32) << label;
        if (v)
            table << std::fixed << std::setprecision(2) << *v << "\n";
        else
            table << "undefined\n";
    }
    write_json(cfg.out_dir / "correlations.json",
               {{"configuration", cfg.to_json()}, {"words", lexicon.size()}, {"matrix", matrix}, {"pairs", pairs}});
    log << table.str();
    return m;
}

std::optional<double> cmd_alpha(const RunConfig& cfg, PropertyKind property, std::ostream& log)
{
    if (!cfg.alpha_reference)
        throw UsageError("alpha.reference is not configured");
    require_file(*cfg.alpha_reference, "reference norms");
    require_file(cfg.lexicon_path, "lexicon");
    const auto lookup = make_lookup(read_lexicon(cfg.lexicon_path));
    const NormDataset reference =
        convert_scale(load_norms(*cfg.alpha_reference, property, cfg.alpha_scale), LikertScale(1.0, 7.0));

    std::vector<std::vector<double>> raters(2);
    for (const auto& r : reference.records) {
        auto it = lookup.find(r.word);
        if (it == lookup.end())
            continue;
        raters[0].push_back(rating_of(it->second, property));
        raters[1].push_back(r.rating);
    }
    if (raters[0].size() < 2)
        throw DataError("fewer than 2 reference words are in the lexicon");
    const auto alpha = cronbach_alpha(raters);

    write_json(cfg.out_dir / ("alpha_" + std::string(property_id(property)) + ".json"),
               {{"configuration", cfg.to_json()},
                {"property", property_id(property)},
                {"shared_words", raters[0].size()},
                {"alpha", alpha ? json(*alpha) : json(nullptr)}});
    log << property_id(property) << ": " << raters[0].size() << " shared words, alpha = ";
    if (alpha)
        log << std::fixed << std::setprecision(3) << *alpha << "\n";
    else
        log << "undefined\n";
    return alpha;
}

} // namespace psynorms
