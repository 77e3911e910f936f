// Small graphs and random generators shared by the unit suites.
#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "gsmab/graph.hpp"

namespace fixtures {

using gsmab::Edge;
using gsmab::Graph;
using gsmab::NodeId;

inline Graph path(std::size_t n) {
    std::vector<Edge> e;
    for (NodeId i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return Graph(n, e);
}

inline Graph cycle(std::size_t n) {
    std::vector<Edge> e;
    for (NodeId i = 0; i < n; ++i) e.emplace_back(i, static_cast<NodeId>((i + 1) % n));
    return Graph(n, e);
}

inline Graph complete(std::size_t n) {
    std::vector<Edge> e;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return Graph(n, e);
}

// Center 0, leaves 1..leaves.
inline Graph star(std::size_t leaves) {
    std::vector<Edge> e;
    for (NodeId i = 1; i <= leaves; ++i) e.emplace_back(0, i);
    return Graph(leaves + 1, e);
}

// Two k-cliques {0..k-1}, {k..2k-1} joined by the bridge (k-1, k).
inline Graph dumbbell(std::size_t k) {
    std::vector<Edge> e;
    for (NodeId i = 0; i < k; ++i)
        for (NodeId j = i + 1; j < k; ++j) {
            e.emplace_back(i, j);
            e.emplace_back(static_cast<NodeId>(i + k), static_cast<NodeId>(j + k));
        }
    e.emplace_back(static_cast<NodeId>(k - 1), static_cast<NodeId>(k));
    return Graph(2 * k, e);
}

// Random spanning tree plus each remaining pair with probability `density`.
inline Graph random_connected(std::size_t n, double density, std::mt19937_64& rng) {
    std::vector<NodeId> order(n);
    for (NodeId i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Edge> e;
    std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
    for (std::size_t k = 1; k < n; ++k) {
        const NodeId a = order[k];
        const NodeId b = order[std::uniform_int_distribution<std::size_t>(0, k - 1)(rng)];
        e.emplace_back(a, b);
        used[a][b] = used[b][a] = true;
    }
    std::bernoulli_distribution coin(density);
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (!used[i][j] && coin(rng)) e.emplace_back(i, j);
    return Graph(n, e);
}

}  // namespace fixtures
