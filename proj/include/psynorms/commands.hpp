#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>

#include "psynorms/config.hpp"
#include "psynorms/evaluation.hpp"
#include "psynorms/features.hpp"
#include "psynorms/lexicon.hpp"
#include "psynorms/readability.hpp"

namespace psynorms {

/// Loads the frequency lists and grade lexicons that are configured, plus the
/// embedding models for the requested views.
FeatureResources load_resources(const RunConfig& cfg, const std::set<ViewKind>& views);

struct PrepareResult {
    std::map<PropertyKind, std::size_t> rows;
    std::filesystem::path log_path;
};

/// Orthography map, scale conversion and merging for every property that has
/// sources; writes <prepared_dir>/<property>.csv and prepare_log.json.
PrepareResult cmd_prepare(const RunConfig& cfg, std::ostream& log);

/// Trains <models_dir>/<property>.json from the prepared norms.
MultiViewModel cmd_train(const RunConfig& cfg, PropertyKind property, std::ostream& log);

/// Cross-validation; writes <out>/eval_<property>.json and .txt.
EvalReport cmd_eval(const RunConfig& cfg, PropertyKind property, std::ostream& log);

/// Builds and writes the lexicon from the four trained models.
LexiconBuild cmd_build_lexicon(const RunConfig& cfg, std::ostream& log);

/// Features of one text file; writes <out>/readability_<stem>.json.
TextFeatures cmd_readability_text(const RunConfig& cfg, const std::filesystem::path& text, std::ostream& log);

/// Grade classification over the configured corpus; writes
/// <out>/readability_eval.json and .txt.
std::vector<SubsetScore> cmd_readability_corpus(const RunConfig& cfg, std::ostream& log);

/// Pearson matrix of the lexicon's properties; writes <out>/correlations.json.
CorrelationMatrix cmd_corr(const RunConfig& cfg, std::ostream& log);

/// Cronbach's alpha between lexicon ratings and a reference norms file, over
/// the words both contain.
std::optional<double> cmd_alpha(const RunConfig& cfg, PropertyKind property, std::ostream& log);

} // namespace psynorms
