// chain.hpp — mean-field two-cluster random-walk chain and its equilibrium.
#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "gsmab/graph.hpp"

namespace gsmab {

struct TwoClusterModel {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    double p = 0.0;  // intra-cluster edge probability
    double q = 0.0;  // inter-cluster edge probability
};

// Row-stochastic 2x2 matrix, rows indexed by the current cluster.
struct TransitionMatrix {
    double p11, p12, p21, p22;
};

struct Equilibrium {
    double v1, v2;
};

struct ChainSummary {
    TransitionMatrix transition;
    Equilibrium equilibrium;
};

// p12 = q*n2 / (q*n2 + p*(n1-1)), p21 symmetric, diagonal fills each row.
TransitionMatrix transition_matrix(const TwoClusterModel& m);

// v1 = p21 / (p12 + p21), v2 = 1 - v1.
Equilibrium equilibrium(const TransitionMatrix& t);

ChainSummary summarize(const TwoClusterModel& m);

// Fraction of random-walk steps spent in each cluster, averaged over
// `trials` independent walks of `walk_steps` steps from uniform starts.
std::vector<double> empirical_occupancy(const Graph& g, const Partition& part, std::size_t walk_steps,
                                        std::size_t trials, Rng& rng);

}  // namespace gsmab
