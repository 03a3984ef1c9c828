#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "termrank/common.hpp"

namespace termrank {

/// Directed weighted graph with a restart (jump) distribution, the shared
/// substrate for both the word-level and the term-level random walks.
struct WalkGraph {
    std::size_t n = 0;
    /// out_edges[v] = list of (target, weight > 0)
    std::vector<std::vector<std::pair<std::uint32_t, double>>> out_edges;
    /// Restart probabilities; entries >= 0 and summing to 1.
    std::vector<double> jump;
};

/// Power iteration for the fixed point
///   S = (1 - damping) * jump + damping * T(S)
/// where T follows out-edges with probability proportional to their weight
/// and vertices without out-edges redistribute their mass through the jump
/// vector. Starts at S = jump and stops when the L1 change drops below tol
/// or after max_iter sweeps. The result is nonnegative and sums to 1.
///
/// If deltas is non-null, the L1 change of every sweep is appended to it.
///
/// Throws Error when a dangling vertex exists but the jump vector carries
/// no mass (the walk would leak).
std::vector<double> stationary_scores(const WalkGraph& graph, double damping, double tol,
                                      int max_iter, std::vector<double>* deltas = nullptr);

/// Debug helper: one "from to weight" line per edge plus a trailing jump line.
std::string to_edge_list(const WalkGraph& graph);

}  // namespace termrank
