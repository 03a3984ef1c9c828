#include "termrank/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace termrank {

namespace {

const int* find_rank(const RankerOutput& ranker, const std::string& term) {
    auto it = ranker.ranks.find(term);
    return it == ranker.ranks.end() ? nullptr : &it->second;
}

// Min-max normalization to [0,1] with 1 = best. A constant score vector
// normalizes to all ones so a degenerate ranker still casts a full vote.
std::vector<double> normalize_scores(const std::vector<std::string>& terms,
                                     const RankerOutput& ranker) {
    double lo = 0.0;
    double hi = 0.0;
    bool first = true;
    for (const std::string& term : terms) {
        const double s = ranker.scores.at(term);
        if (first) {
            lo = hi = s;
            first = false;
        } else {
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
    }
    std::vector<double> normalized(terms.size(), 1.0);
    if (hi > lo) {
        for (std::size_t i = 0; i < terms.size(); ++i) {
            normalized[i] = (ranker.scores.at(terms[i]) - lo) / (hi - lo);
        }
    }
    return normalized;
}

std::vector<double> raw_score_sums(const std::vector<std::string>& terms,
                                   const std::vector<RankerOutput>& rankers) {
    bool any_scored = false;
    std::vector<double> sums(terms.size(), 0.0);
    for (const RankerOutput& ranker : rankers) {
        if (ranker.kind != RankerKind::scored_total) {
            continue;
        }
        any_scored = true;
        std::vector<double> normalized = normalize_scores(terms, ranker);
        for (std::size_t i = 0; i < terms.size(); ++i) {
            sums[i] += normalized[i];
        }
    }
    if (!any_scored) {
        throw Error(
            "no scored ranker available to build the jump distribution; "
            "enable one or request a uniform jump explicitly");
    }
    return sums;
}

// Shared finalization: order by (score desc, jump desc, input position asc)
// and derive competition ranks from the scores.
FusedRanking finalize(std::string method, const std::vector<std::string>& terms,
                      const std::vector<double>& scores, const std::vector<double>& jump,
                      double param) {
    std::vector<std::size_t> order(terms.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) {
            return scores[a] > scores[b];
        }
        if (jump[a] != jump[b]) {
            return jump[a] > jump[b];
        }
        return a < b;
    });

    FusedRanking result;
    result.method = std::move(method);
    result.param = param;
    result.entries.reserve(terms.size());
    result.ranks.reserve(terms.size());
    int rank = 1;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i > 0 && scores[order[i]] < scores[order[i - 1]]) {
            rank = static_cast<int>(i) + 1;
        }
        result.entries.emplace_back(terms[order[i]], scores[order[i]]);
        result.ranks.push_back(rank);
    }
    return result;
}

}  // namespace

int rank_relation(const std::string& a, const std::string& b,
                  const std::vector<RankerOutput>& rankers) {
    int net = 0;
    for (const RankerOutput& ranker : rankers) {
        const int* ra = find_rank(ranker, a);
        const int* rb = find_rank(ranker, b);
        if (!ra || !rb) {
            continue;
        }
        if (*ra < *rb) {
            ++net;
        } else if (*rb < *ra) {
            --net;
        }
    }
    return net;
}

double edge_weight(const std::string& a, const std::string& b,
                   const std::vector<RankerOutput>& rankers) {
    double margin = 0.0;
    for (const RankerOutput& ranker : rankers) {
        const int* ra = find_rank(ranker, a);
        const int* rb = find_rank(ranker, b);
        if (!ra || !rb) {
            continue;
        }
        margin += 1.0 / static_cast<double>(*ra) - 1.0 / static_cast<double>(*rb);
    }
    return static_cast<double>(rank_relation(a, b, rankers)) * margin;
}

std::vector<double> jump_distribution(const std::vector<std::string>& terms,
                                      const std::vector<RankerOutput>& rankers) {
    std::vector<double> sums = raw_score_sums(terms, rankers);
    const double total = std::accumulate(sums.begin(), sums.end(), 0.0);
    for (double& p : sums) {
        p /= total;
    }
    return sums;
}

FusionGraph build_fusion_graph(const std::vector<std::string>& terms,
                               const std::vector<RankerOutput>& rankers, bool uniform_jump) {
    if (terms.empty()) {
        throw Error("cannot fuse an empty candidate set");
    }
    FusionGraph graph;
    graph.terms = terms;
    graph.jump = uniform_jump
                     ? std::vector<double>(terms.size(), 1.0 / static_cast<double>(terms.size()))
                     : jump_distribution(terms, rankers);

    for (std::uint32_t i = 0; i < terms.size(); ++i) {
        for (std::uint32_t j = i + 1; j < terms.size(); ++j) {
            // The net vote is antisymmetric and the margin flips sign with
            // it, so their product is shared by both directions.
            const int net = rank_relation(terms[i], terms[j], rankers);
            if (net == 0) {
                continue;
            }
            const double weight = edge_weight(terms[i], terms[j], rankers);
            if (weight <= 0.0) {
                continue;
            }
            if (net > 0) {
                graph.edges.emplace(std::make_pair(j, i), weight);  // j points to preferred i
            } else {
                graph.edges.emplace(std::make_pair(i, j), weight);
            }
        }
    }
    return graph;
}

WalkGraph FusionGraph::to_walk_graph() const {
    WalkGraph walk;
    walk.n = terms.size();
    walk.out_edges.resize(walk.n);
    for (const auto& [key, weight] : edges) {
        walk.out_edges[key.first].emplace_back(key.second, weight);
    }
    walk.jump = jump;
    return walk;
}

FusedRanking fit_rank(const std::vector<std::string>& terms,
                      const std::vector<RankerOutput>& rankers, const FitOptions& options) {
    if (options.d < 0.0 || options.d > 1.0) {
        throw Error("fit mixing weight d must lie in [0, 1]");
    }
    FusionGraph graph = build_fusion_graph(terms, rankers, options.uniform_jump);
    std::vector<double> scores =
        stationary_scores(graph.to_walk_graph(), options.d, options.tol, options.max_iter);
    return finalize("fit", terms, scores, graph.jump, options.d);
}

FusedRanking combsum_rank(const std::vector<std::string>& terms,
                          const std::vector<RankerOutput>& rankers) {
    if (terms.empty()) {
        throw Error("cannot fuse an empty candidate set");
    }
    std::vector<double> sums = raw_score_sums(terms, rankers);
    const double total = std::accumulate(sums.begin(), sums.end(), 0.0);
    std::vector<double> jump(sums);
    for (double& p : jump) {
        p /= total;
    }
    return finalize("combsum", terms, sums, jump, 0.0);
}

namespace {

// Stable three-way quicksort driven by the pairwise majority relation. The
// pivot is the first element of each partition; elements tied with the
// pivot stay in input order around it.
void condorcet_sort(const std::vector<std::string>& terms, std::vector<std::size_t>& indices,
                    const std::vector<RankerOutput>& rankers) {
    if (indices.size() <= 1) {
        return;
    }
    const std::size_t pivot = indices[0];
    std::vector<std::size_t> before;
    std::vector<std::size_t> tied{pivot};
    std::vector<std::size_t> after;
    for (std::size_t k = 1; k < indices.size(); ++k) {
        const int net = rank_relation(terms[indices[k]], terms[pivot], rankers);
        if (net > 0) {
            before.push_back(indices[k]);
        } else if (net < 0) {
            after.push_back(indices[k]);
        } else {
            tied.push_back(indices[k]);
        }
    }
    condorcet_sort(terms, before, rankers);
    condorcet_sort(terms, after, rankers);
    indices.clear();
    indices.insert(indices.end(), before.begin(), before.end());
    indices.insert(indices.end(), tied.begin(), tied.end());
    indices.insert(indices.end(), after.begin(), after.end());
}

}  // namespace

FusedRanking condorcet_rank(const std::vector<std::string>& terms,
                            const std::vector<RankerOutput>& rankers) {
    if (terms.empty()) {
        throw Error("cannot fuse an empty candidate set");
    }
    std::vector<std::size_t> indices(terms.size());
    std::iota(indices.begin(), indices.end(), 0);
    condorcet_sort(terms, indices, rankers);

    FusedRanking result;
    result.method = "condorcet";
    result.entries.reserve(terms.size());
    result.ranks.reserve(terms.size());
    for (std::size_t position = 0; position < indices.size(); ++position) {
        // No scores exist; record the reciprocal output position so
        // downstream consumers still see greater-is-better values.
        result.entries.emplace_back(terms[indices[position]],
                                    1.0 / static_cast<double>(position + 1));
        result.ranks.push_back(static_cast<int>(position) + 1);
    }
    return result;
}

FusedRanking rrf_rank(const std::vector<std::string>& terms,
                      const std::vector<RankerOutput>& rankers, double k) {
    if (terms.empty()) {
        throw Error("cannot fuse an empty candidate set");
    }
    if (k <= 0.0) {
        throw Error("rrf constant k must be positive");
    }
    std::vector<double> scores(terms.size(), 0.0);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        for (const RankerOutput& ranker : rankers) {
            if (const int* rank = find_rank(ranker, terms[i])) {
                scores[i] += 1.0 / (k + static_cast<double>(*rank));
            }
        }
    }
    // Jump probabilities break score ties when scored rankers exist;
    // otherwise input order decides.
    bool any_scored = std::any_of(rankers.begin(), rankers.end(), [](const RankerOutput& r) {
        return r.kind == RankerKind::scored_total;
    });
    std::vector<double> jump =
        any_scored ? jump_distribution(terms, rankers) : std::vector<double>(terms.size(), 0.0);
    return finalize("rrf", terms, scores, jump, k);
}

}  // namespace termrank
