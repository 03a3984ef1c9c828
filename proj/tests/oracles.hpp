// Test-only reference implementations, kept deliberately independent of the
// library code paths they check: a dense linear solve for the walk, brute
// force pair counting for AUC, literal pair enumeration for the fusion
// graph, and exhaustive search for the type cutting point.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "termrank/fusion.hpp"
#include "termrank/graph_walk.hpp"
#include "termrank/rankers.hpp"

namespace oracles {

// Solves (I - d*M) s = (1-d) p by Gaussian elimination with partial
// pivoting, where column j of M is the out-edge transition distribution of
// vertex j, or p when j has no out-edges.
inline std::vector<double> dense_stationary(const termrank::WalkGraph& graph, double damping) {
    const std::size_t n = graph.n;
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        if (graph.out_edges[j].empty()) {
            for (std::size_t i = 0; i < n; ++i) {
                m[i][j] = graph.jump[i];
            }
            continue;
        }
        double total = 0.0;
        for (const auto& [target, weight] : graph.out_edges[j]) {
            total += weight;
        }
        for (const auto& [target, weight] : graph.out_edges[j]) {
            m[target][j] += weight / total;
        }
    }

    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a[i][j] = (i == j ? 1.0 : 0.0) - damping * m[i][j];
        }
        a[i][n] = (1.0 - damping) * graph.jump[i];
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row) {
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) {
                pivot = row;
            }
        }
        std::swap(a[col], a[pivot]);
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col] == 0.0) {
                continue;
            }
            const double factor = a[row][col] / a[col][col];
            for (std::size_t k = col; k <= n; ++k) {
                a[row][k] -= factor * a[col][k];
            }
        }
    }
    std::vector<double> solution(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        solution[i] = a[i][n] / a[i][i];
    }
    return solution;
}

// O(P*N) pair counting with half credit for ties.
inline double brute_force_auc(const std::vector<double>& positives,
                              const std::vector<double>& negatives) {
    double wins = 0.0;
    for (double p : positives) {
        for (double n : negatives) {
            if (p > n) {
                wins += 1.0;
            } else if (p == n) {
                wins += 0.5;
            }
        }
    }
    return wins / (static_cast<double>(positives.size()) * static_cast<double>(negatives.size()));
}

struct OracleEdge {
    std::uint32_t from;
    std::uint32_t to;
    double weight;

    friend bool operator==(const OracleEdge&, const OracleEdge&) = default;
};

// Literal translation of the two-condition edge rule, enumerating every
// ordered pair separately instead of sharing work across directions.
inline std::vector<OracleEdge> brute_force_edges(
    const std::vector<std::string>& terms, const std::vector<termrank::RankerOutput>& rankers) {
    std::vector<OracleEdge> edges;
    for (std::uint32_t j = 0; j < terms.size(); ++j) {
        for (std::uint32_t i = 0; i < terms.size(); ++i) {
            if (i == j) {
                continue;
            }
            int prefer_i = 0;
            int prefer_j = 0;
            double margin = 0.0;
            for (const auto& ranker : rankers) {
                auto ri = ranker.ranks.find(terms[i]);
                auto rj = ranker.ranks.find(terms[j]);
                if (ri == ranker.ranks.end() || rj == ranker.ranks.end()) {
                    continue;
                }
                if (ri->second < rj->second) {
                    ++prefer_i;
                }
                if (rj->second < ri->second) {
                    ++prefer_j;
                }
                margin += 1.0 / ri->second - 1.0 / rj->second;
            }
            const int relation = prefer_i - prefer_j;
            const double weight = relation * margin;
            if (relation > 0 && weight > 0.0) {
                edges.push_back({j, i, weight});
            }
        }
    }
    std::sort(edges.begin(), edges.end(), [](const OracleEdge& a, const OracleEdge& b) {
        return a.from != b.from ? a.from < b.from : a.to < b.to;
    });
    return edges;
}

// Exhaustive cutting-point search over frequencies already sorted
// descending: among prefix sizes covering more than half the mass, pick the
// largest gap (first on ties).
inline std::size_t exhaustive_cut(const std::vector<std::int64_t>& sorted_freqs) {
    std::int64_t total = 0;
    for (std::int64_t f : sorted_freqs) {
        total += f;
    }
    std::size_t best_k = 0;
    std::int64_t best_gap = -1;
    std::int64_t cumulative = 0;
    for (std::size_t k = 1; k <= sorted_freqs.size(); ++k) {
        cumulative += sorted_freqs[k - 1];
        if (2 * cumulative <= total) {
            continue;
        }
        std::int64_t gap =
            k < sorted_freqs.size() ? sorted_freqs[k - 1] - sorted_freqs[k] : sorted_freqs[k - 1];
        if (gap > best_gap) {
            best_gap = gap;
            best_k = k;
        }
    }
    return best_k;
}

// --- random instance generators -------------------------------------------

inline std::vector<std::string> make_terms(std::size_t n) {
    std::vector<std::string> terms;
    for (std::size_t i = 0; i < n; ++i) {
        terms.push_back("t" + std::to_string(i));
    }
    return terms;
}

inline termrank::RankerOutput random_scored_ranker(const std::vector<std::string>& terms,
                                                   std::mt19937_64& rng, const std::string& id) {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::unordered_map<std::string, double> scores;
    for (const auto& term : terms) {
        scores.emplace(term, uniform(rng));
    }
    termrank::RankerOutput out;
    out.ranker_id = id;
    out.kind = termrank::RankerKind::scored_total;
    out.ranks = termrank::competition_ranks(terms, scores);
    out.scores = std::move(scores);
    return out;
}

// An order-only view: a random permutation, optionally restricted to a
// random subset (partial) and optionally coarsened into two blocks the way
// the binary views rank.
inline termrank::RankerOutput random_order_ranker(const std::vector<std::string>& terms,
                                                  std::mt19937_64& rng, const std::string& id,
                                                  bool partial) {
    std::vector<std::string> domain = terms;
    std::shuffle(domain.begin(), domain.end(), rng);
    if (partial && domain.size() > 1) {
        std::uniform_int_distribution<std::size_t> keep(1, domain.size());
        domain.resize(keep(rng));
    }
    termrank::RankerOutput out;
    out.ranker_id = id;
    out.kind = partial ? termrank::RankerKind::order_only_partial
                       : termrank::RankerKind::order_only_total;
    std::bernoulli_distribution blocky(0.5);
    if (blocky(rng) && domain.size() > 1) {
        std::uniform_int_distribution<std::size_t> cut(1, domain.size() - 1);
        const std::size_t first_block = cut(rng);
        for (std::size_t i = 0; i < domain.size(); ++i) {
            out.ranks.emplace(domain[i],
                              i < first_block ? 1 : static_cast<int>(first_block) + 1);
        }
    } else {
        for (std::size_t i = 0; i < domain.size(); ++i) {
            out.ranks.emplace(domain[i], static_cast<int>(i) + 1);
        }
    }
    return out;
}

inline termrank::WalkGraph random_walk_graph(std::mt19937_64& rng, std::size_t max_vertices) {
    std::uniform_int_distribution<std::size_t> size_dist(1, max_vertices);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const std::size_t n = size_dist(rng);

    termrank::WalkGraph graph;
    graph.n = n;
    graph.out_edges.resize(n);
    std::bernoulli_distribution dangling(0.3);
    std::bernoulli_distribution edge(0.4);
    for (std::size_t v = 0; v < n; ++v) {
        if (dangling(rng)) {
            continue;  // leave v dangling
        }
        for (std::size_t u = 0; u < n; ++u) {
            if (u != v && edge(rng)) {
                graph.out_edges[v].emplace_back(static_cast<std::uint32_t>(u),
                                                0.1 + uniform(rng));
            }
        }
    }
    graph.jump.resize(n);
    double total = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
        graph.jump[v] = 0.05 + uniform(rng);
        total += graph.jump[v];
    }
    for (double& p : graph.jump) {
        p /= total;
    }
    return graph;
}

}  // namespace oracles
