#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "termrank/common.hpp"

namespace termrank {

/// Expert-annotated important terms for one document, normalized on load.
struct GoldAnnotation {
    std::string doc_id;
    std::vector<std::vector<std::string>> gold_terms;  // nonempty, deduplicated, file order
};

std::vector<GoldAnnotation> load_gold(const std::filesystem::path& path);

/// One ranked prediction: normalized tokens plus its fused score.
struct ScoredTerm {
    std::vector<std::string> tokens;
    double score = 0.0;
};

/// True iff the prediction equals the gold term or contains it as a
/// contiguous token subsequence. The reverse direction (prediction inside
/// gold) does not match.
bool relaxed_match(std::span<const std::string> predicted, std::span<const std::string> gold);

struct PrfResult {
    double precision = 0.0;
    double recall = 0.0;
    double f = 0.0;
    int true_positives = 0;
};

/// Scans the top-n predictions in order; a prediction is a true positive if
/// it relaxed-matches a gold term not credited by an earlier prediction.
/// precision divides by n even when fewer predictions exist; recall divides
/// by the gold count. Throws Error on an empty gold set.
PrfResult prf_at_n(const std::vector<ScoredTerm>& ranked, const GoldAnnotation& gold, int n);

/// Ranking quality over extracted candidates: positives are candidates
/// relaxed-matching any gold term; pairs are scored 1 / 0.5 / 0 for
/// win / tie / loss on the fused score. nullopt when either class is empty.
std::optional<double> auc_ranking(const std::vector<ScoredTerm>& ranked,
                                  const GoldAnnotation& gold);

/// Combined extraction + ranking quality: positive units are the gold terms
/// themselves. A matched gold term takes the best score among its matching
/// candidates; a missed one loses every pairwise comparison. Negatives are
/// the candidates matching no gold term.
std::optional<double> auc_ke(const std::vector<ScoredTerm>& ranked, const GoldAnnotation& gold);

struct DocMetrics {
    std::string doc_id;
    std::map<int, PrfResult> prf;  // n -> P/R/F at n
    std::optional<double> auc_ranking;
    std::optional<double> auc_ke;
    std::size_t candidates = 0;
    std::size_t gold = 0;
    std::size_t gold_matched = 0;  // gold terms matched by >= 1 candidate
};

struct EvalReport {
    std::vector<int> ns;
    std::vector<DocMetrics> per_doc;
    std::map<int, PrfResult> macro_prf;  // unweighted means over documents
    std::optional<double> macro_auc_ranking;
    std::optional<double> macro_auc_ke;
    std::size_t auc_ranking_docs = 0;  // documents included in each AUC mean
    std::size_t auc_ke_docs = 0;
};

/// Per-document metrics plus unweighted macro averages. Documents whose
/// candidate set has no positives or no negatives are excluded from the AUC
/// means (a warning naming them goes to warnings if non-null). Throws Error
/// when an annotated document has no ranking.
EvalReport evaluate_corpus(
    const std::map<std::string, std::vector<ScoredTerm>>& rankings,
    const std::vector<GoldAnnotation>& golds, const std::vector<int>& ns = {5, 10},
    std::vector<std::string>* warnings = nullptr);

std::string report_to_json(const EvalReport& report);
std::string report_to_table(const EvalReport& report);

}  // namespace termrank
