#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "termrank/common.hpp"
#include "termrank/evaluation.hpp"
#include "termrank/fusion.hpp"

namespace termrank {

inline constexpr const char* kToolVersion = "0.1.0";

/// Everything a pipeline run needs: input paths, parameters, ranker
/// switches, fusion method. Loaded from a JSON config file (unknown keys
/// rejected) and optionally overridden by CLI flags.
struct PipelineConfig {
    // paths (resolved relative to the config file's directory)
    std::filesystem::path corpus;
    std::filesystem::path lexicon;
    std::filesystem::path gold;
    std::filesystem::path external_scores;
    std::filesystem::path topic_model;
    std::filesystem::path candidates_dir;    // pre-extracted candidates, one JSONL per doc
    std::filesystem::path preferred_types;   // one semantic type per line

    // parameters
    int window = 10;
    double damping = 0.85;
    double d = 0.5;
    double rrf_k = 60.0;
    double familiarity_threshold = 0.6;
    int topics = 200;
    int lda_iterations = 500;
    double alpha = -1.0;  // <= 0 means 50 / topics
    double beta = 0.01;
    std::uint64_t seed = 1;
    double tol = 1e-9;
    int max_iter = 1000;
    int infer_iterations = 100;

    // ranker switches; unset means "on when its inputs are configured"
    std::optional<bool> use_tfidf;
    std::optional<bool> use_singlerank;
    std::optional<bool> use_topic;
    std::optional<bool> use_external;
    std::optional<bool> use_unfamiliarity;
    std::optional<bool> use_semantic;

    std::string method = "fit";
    bool uniform_jump = false;
    std::vector<int> ns = {5, 10};

    double effective_alpha() const { return alpha > 0 ? alpha : 50.0 / topics; }
    /// Canonical JSON used for the manifest fingerprint.
    std::string canonical_json() const;
};

PipelineConfig load_config(const std::filesystem::path& path);

/// Known method names for the rank command.
const std::vector<std::string>& known_methods();

struct RunOptions {
    std::filesystem::path out_dir;
    int jobs = 1;
};

/// extract: one candidates JSONL per document under <out>/candidates/.
void cmd_extract(const PipelineConfig& config, const RunOptions& run);

/// rank: one ranking TSV per document under <out>/rankings/ for the given
/// fusion method or single view.
void cmd_rank(const PipelineConfig& config, const std::string& method, const RunOptions& run);

/// eval: reads ranking TSVs from rankings_dir and writes report.json and
/// report.txt under <out>/.
void cmd_eval(const PipelineConfig& config, const std::filesystem::path& rankings_dir,
              const RunOptions& run);

/// sweep-d: evaluates the fit method at every d in d_values and writes one
/// row per d to <out>/sweep.tsv.
void cmd_sweep_d(const PipelineConfig& config, const std::vector<double>& d_values,
                 const RunOptions& run);

/// train-lda: trains on the configured corpus and writes <out>/model.json.
void cmd_train_lda(const PipelineConfig& config, const RunOptions& run);

/// select-types: writes the preferred semantic types, one per line, to
/// <out>/preferred_types.txt.
void cmd_select_types(const PipelineConfig& config, const RunOptions& run);

/// Default sweep grid: 0.0, 0.1, ..., 1.0.
std::vector<double> default_d_grid();

/// Parses a ranking TSV (as written by cmd_rank) into doc_id -> ordered
/// scored terms. Exposed for eval and tests.
std::map<std::string, std::vector<ScoredTerm>> load_rankings_dir(
    const std::filesystem::path& dir);

}  // namespace termrank
