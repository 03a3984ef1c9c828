#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "termrank/graph_walk.hpp"
#include "termrank/rankers.hpp"

namespace termrank {

/// Directed term-preference graph: an edge runs from a less-preferred to a
/// more-preferred term when both the net vote count and the reciprocal-rank
/// margin are positive, so at most one direction exists per pair.
struct FusionGraph {
    std::vector<std::string> terms;  // document order (first occurrence)
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> edges;  // (from, to) -> weight
    std::vector<double> jump;  // per-term restart probability, sums to 1

    WalkGraph to_walk_graph() const;
};

/// Final fused ranking of one document's candidates.
struct FusedRanking {
    std::string method;  // "fit" | "combsum" | "condorcet" | "rrf"
    /// Best-first (term_id, score). Condorcet has no scores; it stores the
    /// reciprocal of the output position so greater still means better.
    std::vector<std::pair<std::string, double>> entries;
    std::vector<int> ranks;  // competition ranks aligned with entries
    double param = 0.0;      // d for fit, k for rrf, 0 otherwise
};

/// Net number of views preferring a over b, counted over the rankers whose
/// rank maps contain both terms; within-ranker ties count for neither side.
int rank_relation(const std::string& a, const std::string& b,
                  const std::vector<RankerOutput>& rankers);

/// rank_relation(a, b) times the summed reciprocal-rank margins
/// (1/rank(a) - 1/rank(b)) over the same common-domain rankers. This is the
/// weight of the potential edge b -> a.
double edge_weight(const std::string& a, const std::string& b,
                   const std::vector<RankerOutput>& rankers);

/// Restart distribution: each scored ranker's scores are min-max normalized
/// to [0,1] (an all-equal ranker contributes 1 everywhere), summed per term
/// and normalized to a probability vector. Order-only rankers contribute
/// nothing. Throws Error when no scored ranker exists; callers wanting a
/// uniform jump must request it explicitly.
std::vector<double> jump_distribution(const std::vector<std::string>& terms,
                                      const std::vector<RankerOutput>& rankers);

FusionGraph build_fusion_graph(const std::vector<std::string>& terms,
                               const std::vector<RankerOutput>& rankers,
                               bool uniform_jump = false);

struct FitOptions {
    double d = 0.5;  // weight of graph transitions vs score-based jumps
    double tol = 1e-9;
    int max_iter = 1000;
    bool uniform_jump = false;
};

/// Biased random walk over the term-preference graph; final order by
/// descending stationary score, ties by descending jump probability, then
/// by input (first-occurrence) position.
FusedRanking fit_rank(const std::vector<std::string>& terms,
                      const std::vector<RankerOutput>& rankers, const FitOptions& options = {});

/// Sum of min-max normalized scores over the scored rankers; same
/// tie-breaks as fit_rank.
FusedRanking combsum_rank(const std::vector<std::string>& terms,
                          const std::vector<RankerOutput>& rankers);

/// Deterministic quicksort by pairwise majority: a precedes b iff
/// rank_relation(a, b) > 0; ties keep input order; the pivot is the first
/// element of each partition.
FusedRanking condorcet_rank(const std::vector<std::string>& terms,
                            const std::vector<RankerOutput>& rankers);

/// RRF(t) = sum over rankers ranking t of 1 / (k + rank(t)); same
/// tie-breaks as fit_rank.
FusedRanking rrf_rank(const std::vector<std::string>& terms,
                      const std::vector<RankerOutput>& rankers, double k = 60.0);

}  // namespace termrank
