#include "doctest.h"

#include <cstdlib>
#include <sstream>

#include "json.hpp"

#include "helpers.hpp"
#include "psynorms/commands.hpp"
#include "psynorms/error.hpp"
#include "workspace.hpp"

using namespace psynorms;

namespace {

std::size_t data_lines(const std::filesystem::path& p)
{
    const auto text = testing::slurp(p);
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) - 1;
}

void train_all(const RunConfig& cfg)
{
    std::ostringstream log;
    for (auto p : kAllProperties)
        cmd_train(cfg, p, log);
}

} // namespace

TEST_CASE("default configuration")
{
    const auto cfg = resolve_config(default_settings());
    CHECK(cfg.seed == 42);
    CHECK(cfg.k == 5);
    CHECK(cfg.reps == 20);
    CHECK(cfg.lambda == 1.0);
    CHECK(cfg.min_count == 8);
    CHECK(cfg.mattr_window == 50);
    CHECK(cfg.orthography == "starter");
    CHECK(cfg.sources.empty());
    CHECK_FALSE(cfg.combos.has_value());
    CHECK(cfg.views.at(PropertyKind::AgeOfAcquisition) == ViewSet{ViewKind::Lexical, ViewKind::EmbeddingB});
    CHECK(cfg.views.at(PropertyKind::SubjectiveFrequency).size() == 3);
    CHECK(cfg.lexicon_path == std::filesystem::path("out") / "lexicon.csv");
    CHECK(cfg.to_json()["eval.seed"] == "42");
}

TEST_CASE("settings file")
{
    testing::TempDir dir;
    auto path = dir.write("run.ini", "[eval]\nseed = 7\nk=10\n\n[regression]\nlambda = 0.25\n"
                                     "views_aoa = lexical+skipgram\n[prepare]\naoa = a.csv@1-9, b.csv\n");
    auto s = read_settings_file(path);
    CHECK(s.at("eval.seed") == "7");
    CHECK(s.at("eval.k") == "10");
    auto merged = default_settings();
    overlay(merged, s);
    auto cfg = resolve_config(merged);
    CHECK(cfg.seed == 7);
    CHECK(cfg.k == 10);
    CHECK(cfg.lambda == 0.25);
    CHECK(cfg.views.at(PropertyKind::AgeOfAcquisition) == ViewSet{ViewKind::Lexical, ViewKind::EmbeddingA});
    const auto& aoa = cfg.sources.at(PropertyKind::AgeOfAcquisition);
    REQUIRE(aoa.size() == 2);
    CHECK(aoa[0].path == "a.csv");
    CHECK(aoa[0].scale == LikertScale(1, 9));
    CHECK(aoa[1].scale == LikertScale(1, 7));

    CHECK_THROWS_AS(read_settings_file(dir.write("bad.ini", "[eval]\nsede = 7\n")), UsageError);
    CHECK_THROWS_AS(read_settings_file(dir.write("bad2.ini", "[nope]\nx = 1\n")), UsageError);
    CHECK_THROWS_AS(read_settings_file(dir.write("bad3.ini", "seed = 7\n")), UsageError);
    CHECK_THROWS_AS(read_settings_file(dir / "missing.ini"), UsageError);
}

TEST_CASE("invalid values are usage errors")
{
    auto with = [](const char* key, const char* value) {
        auto s = default_settings();
        overlay(s, {{key, value}});
        return resolve_config(s);
    };
    CHECK_THROWS_AS(with("regression.lambda", "abc"), UsageError);
    CHECK_THROWS_AS(with("regression.lambda", "-1"), UsageError);
    CHECK_THROWS_AS(with("eval.seed", "x"), UsageError);
    CHECK_THROWS_AS(with("eval.k", "1"), UsageError);
    CHECK_THROWS_AS(with("regression.views_aoa", "lexical+word2vec"), UsageError);
    CHECK_THROWS_AS(with("prepare.target_scale", "7-1"), UsageError);
    CHECK_THROWS_AS(with("features.grades", "a,b,c"), UsageError);
    auto s = default_settings();
    CHECK_THROWS_AS(overlay(s, {{"eval.unknown", "1"}}), UsageError);
}

TEST_CASE("environment overrides")
{
    ::setenv("PSYNORMS_EVAL_SEED", "99", 1);
    ::setenv("PSYNORMS_REGRESSION_VIEWS_AOA", "embedding_a", 1);
    auto env = settings_from_environment();
    ::unsetenv("PSYNORMS_EVAL_SEED");
    ::unsetenv("PSYNORMS_REGRESSION_VIEWS_AOA");
    CHECK(env.at("eval.seed") == "99");
    CHECK(env.at("regression.views_aoa") == "embedding_a");
    auto s = default_settings();
    overlay(s, env);
    CHECK(resolve_config(s).seed == 99);
}

TEST_CASE("view set text")
{
    CHECK(parse_view_set("lexical+embedding_b") == ViewSet{ViewKind::Lexical, ViewKind::EmbeddingB});
    CHECK(parse_view_set("glove + lexical") == ViewSet{ViewKind::Lexical, ViewKind::EmbeddingB});
    CHECK(view_set_id({ViewKind::EmbeddingB, ViewKind::Lexical}) == "lexical+embedding_b");
    CHECK_THROWS_AS(parse_view_set(""), UsageError);
    CHECK_THROWS_AS(parse_view_set("lexical+"), UsageError);
}

TEST_CASE("prepare, train and eval")
{
    testing::Workspace ws;
    auto cfg = ws.config();
    std::ostringstream log;

    auto prep = cmd_prepare(cfg, log);
    CHECK(prep.rows.at(PropertyKind::Concreteness) == 160);
    CHECK(prep.rows.at(PropertyKind::AgeOfAcquisition) == 72 + 60 - 12);
    CHECK(prep.rows.at(PropertyKind::SubjectiveFrequency) == 160);
    CHECK(data_lines(cfg.prepared_dir / "aoa.csv") == 120);
    auto plog = nlohmann::json::parse(testing::slurp(prep.log_path));
    CHECK(plog["properties"]["aoa"]["steps"].size() == 2);
    CHECK(plog["properties"]["aoa"]["steps"][1]["merged_rows_after"] == 120);
    auto aoa = load_norms(cfg.prepared_dir / "aoa.csv", PropertyKind::AgeOfAcquisition, LikertScale(1, 7));
    for (const auto& r : aoa.records) {
        CHECK(r.rating >= 1.0);
        CHECK(r.rating <= 7.0);
    }

    auto model = cmd_train(cfg, PropertyKind::Concreteness, log);
    CHECK(model.views() == ViewSet{ViewKind::EmbeddingA, ViewKind::EmbeddingB});
    CHECK(std::filesystem::exists(cfg.models_dir / "concreteness.json"));
    CHECK(load_model(cfg.models_dir / "concreteness.json").submodels.size() == 2);

    auto report = cmd_eval(cfg, PropertyKind::Concreteness, log);
    REQUIRE(report.results.size() == 7);
    CHECK(report.results[0].folds.size() == 6);
    const auto best = report.results[5]; // embedding_a + embedding_b
    CHECK(*best.pearson > 0.9);
    CHECK(*best.pearson > *report.results[0].pearson);
    const auto first = testing::slurp(cfg.out_dir / "eval_concreteness.json");
    auto j = nlohmann::json::parse(first);
    CHECK(j["configuration"]["run"]["eval.seed"] == "42");
    CHECK(std::filesystem::exists(cfg.out_dir / "eval_concreteness.txt"));

    cmd_eval(cfg, PropertyKind::Concreteness, log);
    CHECK(testing::slurp(cfg.out_dir / "eval_concreteness.json") == first);

    auto other = ws.config({{"eval.seed", "43"}});
    cmd_eval(other, PropertyKind::Concreteness, log);
    CHECK(testing::slurp(cfg.out_dir / "eval_concreteness.json") != first);

    auto lexical_only = ws.config({{"eval.combos", "lexical;lexical+embedding_a"}});
    auto r2 = cmd_eval(lexical_only, PropertyKind::SubjectiveFrequency, log);
    CHECK(r2.results.size() == 2);

    auto no_b = ws.config({{"features.embedding_b", ""}});
    CHECK(cmd_eval(no_b, PropertyKind::Concreteness, log).results.size() == 3);
    CHECK_THROWS_AS(cmd_train(no_b, PropertyKind::Concreteness, log), UsageError);
}

TEST_CASE("lexicon, correlations, alpha and readability")
{
    testing::Workspace ws;
    auto cfg = ws.config();
    std::ostringstream log;
    cmd_prepare(cfg, log);
    train_all(cfg);

    auto build = cmd_build_lexicon(cfg, log);
    REQUIRE_FALSE(build.entries.empty());
    auto lex = read_lexicon(cfg.lexicon_path);
    CHECK(lex.size() == build.entries.size());
    for (const auto& e : lex) {
        CHECK(e.word != testing::synthetic_word(0)); // loanword
        CHECK(e.corpus_count >= 8);
        CHECK(e.pos != PartOfSpeech::Other);
    }
    const auto lex_bytes = testing::slurp(cfg.lexicon_path);
    cmd_build_lexicon(cfg, log);
    CHECK(testing::slurp(cfg.lexicon_path) == lex_bytes);
    auto report = nlohmann::json::parse(testing::slurp(cfg.out_dir / "lexicon_report.json"));
    CHECK(report["lexicon_size"] == lex.size());

    auto stricter = cmd_build_lexicon(ws.config({{"lexicon.min_count", "30"}, {"lexicon.file", (ws.dir / "l30.csv").string()}}), log);
    CHECK(stricter.entries.size() < build.entries.size());

    auto m = cmd_corr(cfg, log);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(*m[i][i] == doctest::Approx(1.0));
    auto corr = nlohmann::json::parse(testing::slurp(cfg.out_dir / "correlations.json"));
    CHECK(corr["pairs"].size() == 6);
    // concreteness and imageability share most of their generating signal
    CHECK(*m[0][2] > 0.5);

    auto alpha_cfg = ws.config({{"alpha.reference", ws.settings.at("prepare.concreteness").substr(
                                                         0, ws.settings.at("prepare.concreteness").find('@'))}});
    auto alpha = cmd_alpha(alpha_cfg, PropertyKind::Concreteness, log);
    REQUIRE(alpha.has_value());
    CHECK(*alpha > 0.8);
    CHECK(*alpha <= 1.0);
    CHECK(std::filesystem::exists(cfg.out_dir / "alpha_concreteness.json"));
    CHECK_THROWS_AS(cmd_alpha(cfg, PropertyKind::Concreteness, log), UsageError);

    auto text = ws.dir.write("sample.txt", "O menino brincou na casa. Depois " + testing::synthetic_word(5) + " dormiu!");
    auto f = cmd_readability_text(cfg, text, log);
    CHECK(f.size() == 14);
    CHECK(f.contains("mean_aoa"));
    CHECK(std::filesystem::exists(cfg.out_dir / "readability_sample.json"));

    auto scores = cmd_readability_corpus(cfg, log);
    CHECK(scores.size() == 11);
    for (const auto& s : scores) {
        CHECK(s.f1 >= 0.0);
        CHECK(s.f1 <= 1.0);
    }
    auto eval = nlohmann::json::parse(testing::slurp(cfg.out_dir / "readability_eval.json"));
    CHECK(eval.dump().find("kernel") != std::string::npos);
}

TEST_CASE("missing inputs")
{
    testing::Workspace ws(60);
    std::ostringstream log;
    auto cfg = ws.config();
    CHECK_THROWS_AS(cmd_train(cfg, PropertyKind::Concreteness, log), DataError); // not prepared yet
    CHECK_THROWS_AS(cmd_build_lexicon(cfg, log), DataError);                     // no models
    CHECK_THROWS_AS(cmd_corr(cfg, log), DataError);                              // no lexicon
    CHECK_THROWS_AS(cmd_prepare(resolve_config(default_settings()), log), UsageError);
    auto missing = ws.config({{"prepare.concreteness", (ws.dir / "nope.csv").string()}});
    CHECK_THROWS_AS(cmd_prepare(missing, log), DataError);
    auto bad_manifest = ws.config({{"readability.manifest", ws.dir.write("m.csv", "file,grade\nzz.txt,4\n").string()}});
    CHECK_THROWS_AS(cmd_readability_corpus(bad_manifest, log), DataError);
}
