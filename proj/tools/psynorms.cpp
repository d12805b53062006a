// psynorms: infer psycholinguistic word norms, build the lexicon, score readability.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "psynorms/commands.hpp"
#include "psynorms/error.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kData = 3, kNumerical = 4 };

} // namespace

int main(int argc, char** argv)
{
    using namespace psynorms;

    CLI::App app{"Psycholinguistic norm induction toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> lambda;
    std::optional<std::string> views;
    std::optional<std::uint64_t> min_count;
    std::optional<std::string> out;
    app.add_option("-c,--config", config_path, "Configuration file (INI sections per module)");
    app.add_option("--seed", seed, "Seed for all shuffles");
    app.add_option("--lambda", lambda, "Ridge regularization strength");
    app.add_option("--views", views, "Views for the property, e.g. lexical+embedding_b");
    app.add_option("--min-count", min_count, "Minimum corpus count for lexicon entries");
    app.add_option("--out", out, "Output directory");

    std::string property;
    auto* prepare = app.add_subcommand("prepare", "Adapt, rescale and merge the raw norms");
    auto* train = app.add_subcommand("train", "Train the multi-view model of a property");
    train->add_option("property", property, "concreteness | aoa | imageability | subj_frequency")->required();
    auto* eval = app.add_subcommand("eval", "Repeated k-fold cross-validation over view combinations");
    eval->add_option("property", property, "concreteness | aoa | imageability | subj_frequency")->required();
    auto* lexicon = app.add_subcommand("build-lexicon", "Annotate the filtered dictionary with inferred norms");
    std::string text_path;
    auto* readability = app.add_subcommand("readability", "Readability features of a text, or the grade-level evaluation of the configured corpus");
    readability->add_option("text", text_path, "Text file; omit to evaluate the configured corpus");
    auto* corr = app.add_subcommand("corr", "Pearson correlations among the lexicon's properties");
    std::string reference;
    std::string reference_scale;
    auto* alpha = app.add_subcommand("alpha", "Cronbach's alpha of lexicon ratings against reference norms");
    alpha->add_option("property", property, "concreteness | aoa | imageability | subj_frequency")->required();
    alpha->add_option("--reference", reference, "Reference norms CSV (word,rating)");
    alpha->add_option("--scale", reference_scale, "Scale of the reference norms, e.g. 1-7");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        Settings settings;
        if (!config_path.empty())
            overlay(settings, read_settings_file(config_path));
        overlay(settings, settings_from_environment());

        Settings flags;
        if (seed)
            flags["eval.seed"] = std::to_string(*seed);
        if (lambda)
            flags["regression.lambda"] = std::to_string(*lambda);
        if (min_count)
            flags["lexicon.min_count"] = std::to_string(*min_count);
        if (out)
            flags["data.out"] = *out;
        if (views) {
            if (property.empty())
                throw UsageError("--views needs a property (train/eval)");
            const auto p = parse_property(property);
            flags["regression.views_" + std::string(property_id(p))] = *views;
            if (*eval)
                flags["eval.combos"] = *views;
        }
        if (!reference.empty())
            flags["alpha.reference"] = reference;
        if (!reference_scale.empty())
            flags["alpha.scale"] = reference_scale;
        overlay(settings, flags);
        const RunConfig cfg = resolve_config(settings);

        if (*prepare)
            cmd_prepare(cfg, std::cout);
        else if (*train)
            cmd_train(cfg, parse_property(property), std::cout);
        else if (*eval)
            cmd_eval(cfg, parse_property(property), std::cout);
        else if (*lexicon)
            cmd_build_lexicon(cfg, std::cout);
        else if (*readability) {
            if (text_path.empty())
                cmd_readability_corpus(cfg, std::cout);
            else
                cmd_readability_text(cfg, text_path, std::cout);
        } else if (*corr)
            cmd_corr(cfg, std::cout);
        else if (*alpha)
            cmd_alpha(cfg, parse_property(property), std::cout);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kData;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kData;
    }
    return kOk;
}
