#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "termrank/graph_walk.hpp"

using namespace termrank;

TEST_SUITE_BEGIN("graph_walk");

namespace {

WalkGraph two_cycle() {
    WalkGraph g;
    g.n = 2;
    g.out_edges = {{{1, 1.0}}, {{0, 1.0}}};
    g.jump = {0.5, 0.5};
    return g;
}

}  // namespace

TEST_CASE("zero damping returns the jump vector exactly") {
    WalkGraph g = two_cycle();
    g.jump = {0.8, 0.2};
    const auto scores = stationary_scores(g, 0.0, 1e-12, 100);
    CHECK(scores[0] == 0.8);
    CHECK(scores[1] == 0.2);
}

TEST_CASE("two-vertex cycle is symmetric") {
    for (double damping : {0.15, 0.5, 0.85}) {
        const auto scores = stationary_scores(two_cycle(), damping, 1e-12, 1000);
        CHECK(scores[0] == doctest::Approx(0.5).epsilon(1e-10));
        CHECK(scores[1] == doctest::Approx(0.5).epsilon(1e-10));
    }
}

TEST_CASE("three-vertex chain with a dangling tail matches the dense solve") {
    WalkGraph g;
    g.n = 3;
    g.out_edges = {{{1, 1.0}}, {{2, 1.0}}, {}};
    g.jump = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    const auto scores = stationary_scores(g, 0.85, 1e-12, 2000);
    const auto expected = oracles::dense_stationary(g, 0.85);
    for (std::size_t v = 0; v < 3; ++v) {
        CHECK(std::abs(scores[v] - expected[v]) <= 1e-8);
    }
}

TEST_CASE("random graphs agree with the dense oracle") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> damping_dist(0.0, 0.9);
    for (int trial = 0; trial < 100; ++trial) {
        const WalkGraph g = oracles::random_walk_graph(rng, 8);
        const double damping = damping_dist(rng);
        const auto scores = stationary_scores(g, damping, 1e-12, 5000);
        const auto expected = oracles::dense_stationary(g, damping);
        for (std::size_t v = 0; v < g.n; ++v) {
            CHECK(std::abs(scores[v] - expected[v]) <= 1e-8);
        }
    }
}

TEST_CASE("scores are nonnegative and sum to one") {
    std::mt19937_64 rng(202);
    for (int trial = 0; trial < 50; ++trial) {
        const WalkGraph g = oracles::random_walk_graph(rng, 12);
        const double tol = 1e-10;
        const auto scores = stationary_scores(g, 0.85, tol, 5000);
        double total = 0.0;
        for (double s : scores) {
            CHECK(s >= 0.0);
            total += s;
        }
        CHECK(std::abs(total - 1.0) <= 10 * tol);
    }
}

TEST_CASE("L1 residual never increases below full damping") {
    std::mt19937_64 rng(303);
    for (int trial = 0; trial < 20; ++trial) {
        const WalkGraph g = oracles::random_walk_graph(rng, 10);
        std::vector<double> deltas;
        stationary_scores(g, 0.9, 1e-12, 3000, &deltas);
        for (std::size_t i = 1; i < deltas.size(); ++i) {
            CHECK(deltas[i] <= deltas[i - 1] + 1e-14);
        }
    }
}

TEST_CASE("relabeling vertices permutes the output identically") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 20; ++trial) {
        const WalkGraph g = oracles::random_walk_graph(rng, 8);
        std::vector<std::uint32_t> perm(g.n);
        std::iota(perm.begin(), perm.end(), 0u);
        std::shuffle(perm.begin(), perm.end(), rng);

        WalkGraph h;
        h.n = g.n;
        h.out_edges.resize(g.n);
        h.jump.resize(g.n);
        for (std::size_t v = 0; v < g.n; ++v) {
            h.jump[perm[v]] = g.jump[v];
            for (const auto& [target, weight] : g.out_edges[v]) {
                h.out_edges[perm[v]].emplace_back(perm[target], weight);
            }
        }
        const auto sg = stationary_scores(g, 0.8, 1e-12, 5000);
        const auto sh = stationary_scores(h, 0.8, 1e-12, 5000);
        for (std::size_t v = 0; v < g.n; ++v) {
            CHECK(sh[perm[v]] == doctest::Approx(sg[v]).epsilon(1e-10));
        }
    }
}

TEST_CASE("dangling vertices with an all-zero jump are rejected") {
    WalkGraph g;
    g.n = 2;
    g.out_edges = {{{1, 1.0}}, {}};
    g.jump = {0.0, 0.0};
    CHECK_THROWS_AS(stationary_scores(g, 0.85, 1e-9, 100), Error);
}

TEST_CASE("empty graph yields an empty score vector") {
    WalkGraph g;
    CHECK(stationary_scores(g, 0.85, 1e-9, 100).empty());
}

TEST_CASE("edge list dump mentions every edge") {
    WalkGraph g = two_cycle();
    const std::string dump = to_edge_list(g);
    CHECK(dump.find("0 1 1") != std::string::npos);
    CHECK(dump.find("jump 0.5 0.5") != std::string::npos);
}

TEST_SUITE_END();
