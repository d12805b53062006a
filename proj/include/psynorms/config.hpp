#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "psynorms/evaluation.hpp"
#include "psynorms/norms.hpp"

namespace psynorms {

/// Flat "section.key" -> value settings, as read from an INI-style file.
using Settings = std::map<std::string, std::string>;

/// Every recognized key with its default value ("" = unset).
const Settings& default_settings();

/// Reads `[section]` / `key = value` text. Unknown keys are a UsageError.
Settings read_settings_file(const std::filesystem::path& path);

/// Overrides from environment variables PSYNORMS_<SECTION>_<KEY>, e.g.
/// PSYNORMS_EVAL_SEED=7 sets eval.seed.
Settings settings_from_environment();

/// Applies `overrides` on top of `base`; unknown keys are a UsageError.
void overlay(Settings& base, const Settings& overrides);

struct NormSource {
    std::filesystem::path path;
    LikertScale scale;
};

struct RunConfig {
    Settings resolved;

    std::filesystem::path prepared_dir;
    std::filesystem::path models_dir;
    std::filesystem::path out_dir;

    std::map<PropertyKind, std::vector<NormSource>> sources;
    std::string orthography; // "starter", "none" or a path
    LikertScale target_scale{1.0, 7.0};

    std::optional<std::filesystem::path> subtlex, subimdb, written, spoken, mixed;
    std::vector<std::filesystem::path> grades;
    std::optional<std::filesystem::path> embedding_a, embedding_b;

    double lambda = 1.0;
    std::map<PropertyKind, ViewSet> views;

    std::uint64_t seed = 0;
    std::size_t k = 5;
    std::size_t reps = 20;
    std::optional<std::vector<ViewSet>> combos; // unset: every combination of the loaded views

    std::optional<std::filesystem::path> dictionary, loanwords, lexicon_frequency;
    std::uint64_t min_count = 8;
    std::filesystem::path lexicon_path;

    std::optional<std::filesystem::path> easy_words, corpus_dir, manifest;
    std::size_t mattr_window = 50;
    double gamma = 0.0;
    double classifier_lambda = 0.1;
    std::size_t folds = 10;

    std::optional<std::filesystem::path> alpha_reference;
    LikertScale alpha_scale{1.0, 7.0};

    nlohmann::json to_json() const;
};

/// Parses and validates every value (not path existence; commands check the
/// paths they use).
RunConfig resolve_config(const Settings& settings);

/// "lexical+embedding_b" -> {Lexical, EmbeddingB}
ViewSet parse_view_set(std::string_view text);
std::string view_set_id(const ViewSet& views);

} // namespace psynorms
