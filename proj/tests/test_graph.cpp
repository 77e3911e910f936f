#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "gsmab/graph.hpp"

using namespace gsmab;

TEST_CASE("construction rejects invalid edge sets") {
    CHECK_THROWS_AS(Graph(3, {{0, 0}, {0, 1}, {1, 2}}), std::domain_error);
    CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}, {1, 2}}), std::domain_error);
    CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 3}}), std::domain_error);
    CHECK_THROWS_AS(Graph(4, {{0, 1}, {2, 3}}), std::domain_error);
    CHECK_THROWS_AS(Graph(0, {}), std::domain_error);
    CHECK_NOTHROW(Graph(1, {}));
}

TEST_CASE("adjacency lists mirror the edge set") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 20; ++t) {
        const auto g = fixtures::random_connected(12, 0.3, rng);
        std::size_t endpoints = 0;
        for (NodeId i = 0; i < g.node_count(); ++i) {
            const auto& nb = g.neighbors(i);
            CHECK(std::is_sorted(nb.begin(), nb.end()));
            endpoints += nb.size();
            for (NodeId j : nb) CHECK(g.has_edge(j, i));
        }
        CHECK(endpoints == 2 * g.edge_count());
    }
}

TEST_CASE("distance on small graphs") {
    const auto p = fixtures::path(3);
    CHECK(distance(p, 0, 2) == 2);
    CHECK(distance(p, 1, 1) == 0);
    CHECK(distance(fixtures::complete(3), 0, 1) == 1);
    CHECK_THROWS_AS(distance(p, 0, 3), std::domain_error);
    CHECK_THROWS_AS(distance(p, 5, 5), std::domain_error);
}

TEST_CASE("ring examples") {
    const auto p = fixtures::path(3);
    CHECK(ring(p, 0, 2) == std::vector<NodeId>{2});
    CHECK(ring(p, 0, 3).empty());
    const auto s = fixtures::star(4);
    CHECK(ring(s, 1, 2) == std::vector<NodeId>{2, 3, 4});
    CHECK_THROWS_AS(ring(p, 0, 0), std::domain_error);
}

TEST_CASE("distance is a metric and rings partition the other nodes") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 2 + t % 11;
        const auto g = fixtures::random_connected(n, 0.2, rng);
        const DistanceTable table(g);
        for (NodeId i = 0; i < n; ++i) {
            CHECK(ring(g, i, 1) == g.neighbors(i));
            std::set<NodeId> seen;
            for (std::uint32_t r = 1; r <= n; ++r)
                for (NodeId j : ring(g, i, r)) {
                    CHECK(seen.insert(j).second);
                    CHECK(table.distance(i, j) == r);
                }
            CHECK(seen.size() == n - 1);
            CHECK(!seen.count(i));
            for (NodeId j = 0; j < n; ++j) {
                CHECK(distance(g, i, j) == distance(g, j, i));
                CHECK((distance(g, i, j) == 0) == (i == j));
                for (NodeId k = 0; k < n; ++k) CHECK(table.distance(i, k) <= table.distance(i, j) + table.distance(j, k));
            }
        }
    }
}

TEST_CASE("incidence rows are lexicographic and low-to-high") {
    const auto tri = fixtures::complete(3);
    CHECK(incidence_rows(tri) == std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}});
    CHECK(incidence_rows(fixtures::path(3)) == std::vector<Edge>{{0, 1}, {1, 2}});
    const Graph shuffled(3, {{2, 1}, {1, 0}});
    CHECK(incidence_rows(shuffled) == std::vector<Edge>{{0, 1}, {1, 2}});
    CHECK(&incidence_rows(tri) == &incidence_rows(tri));
}

TEST_CASE("partition invariants") {
    const auto p = Partition::from_sizes({2, 1, 3});
    CHECK(p.cluster_count() == 3);
    CHECK(p.members(2) == std::vector<NodeId>{3, 4, 5});
    CHECK(p.cluster_of(2) == 1);
    CHECK_THROWS_AS(Partition({0, 2}), std::domain_error);
    CHECK_THROWS_AS(Partition::from_sizes({1, 0}), std::domain_error);
}

TEST_CASE("sbm: cliques and forced repair") {
    SbmConfig cfg;
    cfg.intra_prob = 1.0;
    cfg.inter_prob = 0.0;
    Rng rng(3);
    const auto k4 = sbm_generate(cfg, {4}, rng);
    CHECK(k4.graph.edge_count() == 6);
    CHECK(k4.repair_edges == 0);

    const auto dumbbell = sbm_generate(cfg, {3, 3}, rng);
    CHECK(dumbbell.graph.edge_count() == 7);
    CHECK(dumbbell.repair_edges == 1);
    CHECK(dumbbell.attempts == cfg.max_regen_attempts);
    std::size_t bridges = 0;
    for (const auto& [a, b] : dumbbell.graph.edges())
        if (dumbbell.partition.cluster_of(a) != dumbbell.partition.cluster_of(b)) ++bridges;
    CHECK(bridges == 1);
}

TEST_CASE("sbm: empirical edge densities over 200 seeds") {
    SbmConfig cfg;
    double intra_edges = 0, intra_pairs = 0, inter_edges = 0, inter_pairs = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed);
        const auto d = sbm_generate(cfg, {50, 50}, rng);
        for (const auto& [a, b] : d.graph.edges())
            (d.partition.cluster_of(a) == d.partition.cluster_of(b) ? intra_edges : inter_edges) += 1;
        intra_pairs += 2 * (50 * 49 / 2);
        inter_pairs += 50 * 50;
    }
    CHECK(std::abs(intra_edges / intra_pairs - 0.7) <= 0.02);
    CHECK(std::abs(inter_edges / inter_pairs - 0.01) <= 0.005);
}

TEST_CASE("sbm: geometric cluster sizes start at one") {
    SbmConfig cfg;
    cfg.cluster_count = 20000;
    Rng rng(5);
    const auto sizes = draw_cluster_sizes(cfg, rng);
    double mean = 0;
    for (auto s : sizes) {
        CHECK(s >= 1);
        mean += static_cast<double>(s);
    }
    mean /= static_cast<double>(sizes.size());
    CHECK(std::abs(mean - 12.5) < 0.3);
}

TEST_CASE("sbm: fixed seed is bit-reproducible and always connected") {
    SbmConfig cfg;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng a(seed), b(seed);
        const auto da = sbm_generate(cfg, {}, a);
        const auto db = sbm_generate(cfg, {}, b);
        CHECK(da.graph.edges() == db.graph.edges());
        CHECK(da.partition == db.partition);
        CHECK(component_count(da.graph.node_count(), da.graph.edges()) == 1);
    }
}

TEST_CASE("sbm: config validation") {
    SbmConfig cfg;
    cfg.inter_prob = 0.8;
    Rng rng(1);
    CHECK_THROWS_AS(sbm_generate(cfg, {}, rng), std::domain_error);
    cfg = {};
    cfg.cluster_count = 0;
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);
    cfg = {};
    cfg.size_success_prob = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);
}

TEST_CASE("graph and partition text round trip is bit exact") {
    Rng rng(9);
    const auto d = sbm_generate(SbmConfig{}, {}, rng);
    std::ostringstream gs, ps;
    write_graph(gs, d.graph);
    write_partition(ps, d.partition);
    std::istringstream gi(gs.str()), pi(ps.str());
    const auto g2 = read_graph(gi);
    const auto p2 = read_partition(pi);
    CHECK(g2.edges() == d.graph.edges());
    CHECK(p2 == d.partition);
    std::ostringstream gs2;
    write_graph(gs2, g2);
    CHECK(gs2.str() == gs.str());
    CHECK(gs.str().rfind(std::to_string(d.graph.node_count()) + " " + std::to_string(d.graph.edge_count()) + "\n", 0) == 0);
}
