#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "termrank/corpus.hpp"
#include "termrank/topic_model.hpp"

namespace termrank {

enum class RankerKind {
    scored_total,       // scores and ranks for every candidate
    order_only_total,   // ranks for every candidate, no scores
    order_only_partial  // ranks for a subset of candidates, no scores
};

std::string to_string(RankerKind kind);

/// One view's verdict on a document's candidates. Ranks use competition
/// ranking ("1,2,2,4"): rank(t) = 1 + number of strictly better terms.
struct RankerOutput {
    std::string ranker_id;
    RankerKind kind = RankerKind::scored_total;
    std::unordered_map<std::string, double> scores;  // term_id -> score (scored_total only)
    std::unordered_map<std::string, int> ranks;      // term_id -> rank, 1-based
};

/// Competition ranks for the given ids from a score map: higher score means
/// numerically smaller rank, equal scores share a rank.
std::unordered_map<std::string, int> competition_ranks(
    const std::vector<std::string>& ids, const std::unordered_map<std::string, double>& scores);

/// Builds a scored_total output, deriving ranks from the scores.
RankerOutput scored_output(std::string ranker_id, const std::vector<CandidateTerm>& candidates,
                           std::unordered_map<std::string, double> scores);

/// Undirected word co-occurrence graph over one document.
struct CooccurrenceGraph {
    std::vector<std::string> vertices;  // first-appearance order
    /// Symmetric weights keyed by (i, j) with i < j; value = number of
    /// position pairs at distance < window.
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> edge_weights;
    int window = 10;

    std::uint32_t weight(std::uint32_t a, std::uint32_t b) const;
};

/// Vertices are the word types covered by at least one candidate
/// occurrence; every position pair at distance < window between two
/// distinct vertex words adds 1 to their symmetric edge weight.
/// Self-loops are excluded.
CooccurrenceGraph build_cooccurrence_graph(const Document& doc,
                                           const std::vector<CandidateTerm>& candidates,
                                           int window);

/// score(t) = TF(t, doc) * ln(N / df(t)), where df counts the corpus
/// documents containing t's tokens as a contiguous subsequence. If doc is
/// not in the corpus, df and N are computed over corpus + {doc}.
RankerOutput tfidf_rank(const Document& doc, const std::vector<CandidateTerm>& candidates,
                        const Corpus& corpus);

/// Word scores from the damped random walk over the co-occurrence graph
/// (uniform jump); a term scores the sum of its word scores, counting
/// repeated words with multiplicity. An empty graph yields all-zero scores.
RankerOutput singlerank_rank(const Document& doc, const std::vector<CandidateTerm>& candidates,
                             int window, double damping, double tol, int max_iter);

/// score(t) = sum over t's words (with multiplicity) of
/// P(w|doc) = sum_i phi[i][w] * theta[i]; out-of-vocabulary words add 0.
RankerOutput topic_coherence_rank(const std::vector<CandidateTerm>& candidates,
                                  const TopicModel& model, const std::vector<double>& theta);

/// Parsed external score file. The 2-column form (term, score) applies to
/// every document; the 3-column form (doc_id, term, score) is per-document.
struct ExternalScores {
    bool per_document = false;
    /// doc_id -> (term_id -> score); the 2-column form uses the "" key.
    std::unordered_map<std::string, std::unordered_map<std::string, double>> by_doc;

    const std::unordered_map<std::string, double>* for_doc(const std::string& doc_id) const;
};

ExternalScores load_external_scores(const std::filesystem::path& path);

/// Scores read verbatim from the file; every candidate must be covered or a
/// ValidationError listing the missing terms is thrown.
RankerOutput external_score_rank(const std::vector<CandidateTerm>& candidates,
                                 const ExternalScores& scores, const std::string& doc_id);

/// Two-block partial ranking: candidates with a lexicon familiarity at or
/// below the threshold rank 1, the familiar rest rank 1 + |unfamiliar
/// block|; candidates without a familiarity score are absent.
RankerOutput unfamiliarity_rank(const std::vector<CandidateTerm>& candidates,
                                const Lexicon& lexicon, double threshold);

/// Two-block total ranking: candidates whose lexicon entry carries a
/// preferred semantic type rank 1, all others (including candidates with no
/// lexicon entry) rank 1 + |preferred block|.
RankerOutput semantic_type_rank(const std::vector<CandidateTerm>& candidates,
                                const Lexicon& lexicon,
                                const std::vector<std::string>& preferred_types);

/// Picks the high-frequency semantic types: rank types by how many
/// vocab-member entries carry them (ties broken lexicographically), keep
/// the shortest prefixes covering more than half of all type assignments,
/// and among those cut at the largest frequency gap to the next rank (the
/// final rank's gap is its own frequency). Returns the selected types in
/// rank order.
std::vector<std::string> select_preferred_types(const Lexicon& lexicon);

}  // namespace termrank
