#include "termrank/graph_walk.hpp"

#include <cmath>
#include <sstream>

namespace termrank {

std::vector<double> stationary_scores(const WalkGraph& graph, double damping, double tol,
                                      int max_iter, std::vector<double>* deltas) {
    const std::size_t n = graph.n;
    if (graph.out_edges.size() != n || graph.jump.size() != n) {
        throw Error("walk graph vectors do not match vertex count");
    }
    if (damping < 0.0 || damping > 1.0) {
        throw Error("damping must lie in [0, 1]");
    }
    if (tol <= 0.0 || max_iter < 1) {
        throw Error("tol must be positive and max_iter >= 1");
    }
    if (n == 0) {
        return {};
    }

    std::vector<double> out_sum(n, 0.0);
    bool any_dangling = false;
    for (std::size_t v = 0; v < n; ++v) {
        for (const auto& [target, weight] : graph.out_edges[v]) {
            if (target >= n || weight <= 0.0) {
                throw Error("walk graph has an invalid edge");
            }
            out_sum[v] += weight;
        }
        if (graph.out_edges[v].empty()) {
            any_dangling = true;
        }
    }
    double jump_sum = 0.0;
    for (double p : graph.jump) {
        if (p < 0.0) {
            throw Error("jump probabilities must be nonnegative");
        }
        jump_sum += p;
    }
    if (any_dangling && jump_sum == 0.0) {
        throw Error("dangling vertices with an all-zero jump vector would sink the walk");
    }

    std::vector<double> scores = graph.jump;
    std::vector<double> next(n, 0.0);
    for (int iter = 0; iter < max_iter; ++iter) {
        double dangling_mass = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            if (graph.out_edges[v].empty()) {
                dangling_mass += scores[v];
            }
        }
        for (std::size_t v = 0; v < n; ++v) {
            next[v] = (1.0 - damping + damping * dangling_mass) * graph.jump[v];
        }
        for (std::size_t v = 0; v < n; ++v) {
            if (graph.out_edges[v].empty()) {
                continue;
            }
            const double spread = damping * scores[v] / out_sum[v];
            for (const auto& [target, weight] : graph.out_edges[v]) {
                next[target] += spread * weight;
            }
        }
        double delta = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            delta += std::abs(next[v] - scores[v]);
        }
        scores.swap(next);
        if (deltas) {
            deltas->push_back(delta);
        }
        if (delta < tol) {
            break;
        }
    }
    return scores;
}

std::string to_edge_list(const WalkGraph& graph) {
    std::ostringstream out;
    for (std::size_t v = 0; v < graph.n; ++v) {
        for (const auto& [target, weight] : graph.out_edges[v]) {
            out << v << ' ' << target << ' ' << format_score(weight) << '\n';
        }
    }
    out << "jump";
    for (double p : graph.jump) {
        out << ' ' << format_score(p);
    }
    out << '\n';
    return out.str();
}

}  // namespace termrank
