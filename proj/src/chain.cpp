#include "gsmab/chain.hpp"

#include <stdexcept>

namespace gsmab {

TransitionMatrix transition_matrix(const TwoClusterModel& m) {
    if (m.n1 < 1 || m.n2 < 1) throw std::domain_error("cluster sizes must be >= 1");
    if (!(m.q >= 0.0 && m.q <= m.p && m.p <= 1.0)) throw std::domain_error("need 0 <= q <= p <= 1");
    const double n1 = static_cast<double>(m.n1);
    const double n2 = static_cast<double>(m.n2);
    const double out1 = m.q * n2;
    const double out2 = m.q * n1;
    const double den1 = out1 + m.p * (n1 - 1.0);
    const double den2 = out2 + m.p * (n2 - 1.0);
    if (!(den1 > 0.0) || !(den2 > 0.0)) throw std::domain_error("transition probabilities undefined (zero expected degree)");
    const double p12 = out1 / den1;
    const double p21 = out2 / den2;
    return {1.0 - p12, p12, p21, 1.0 - p21};
}

Equilibrium equilibrium(const TransitionMatrix& t) {
    const double leave = t.p12 + t.p21;
    if (!(leave > 0.0)) throw std::domain_error("reducible chain: both clusters are absorbing");
    const double v1 = t.p21 / leave;
    return {v1, 1.0 - v1};
}

ChainSummary summarize(const TwoClusterModel& m) {
    const auto t = transition_matrix(m);
    return {t, equilibrium(t)};
}

std::vector<double> empirical_occupancy(const Graph& g, const Partition& part, std::size_t walk_steps,
                                        std::size_t trials, Rng& rng) {
    if (part.cluster_count() == 0) throw std::domain_error("empty partition");
    if (part.node_count() != g.node_count()) throw std::domain_error("partition does not match graph");
    if (walk_steps == 0 || trials == 0) throw std::domain_error("walk_steps and trials must be >= 1");

    std::vector<double> freq(part.cluster_count(), 0.0);
    std::uniform_int_distribution<std::size_t> start(0, g.node_count() - 1);
    for (std::size_t t = 0; t < trials; ++t) {
        std::vector<std::size_t> counts(part.cluster_count(), 0);
        auto node = static_cast<NodeId>(start(rng));
        for (std::size_t s = 0; s < walk_steps; ++s) {
            const auto& nb = g.neighbors(node);
            if (!nb.empty()) node = nb[std::uniform_int_distribution<std::size_t>(0, nb.size() - 1)(rng)];
            ++counts[part.cluster_of(node)];
        }
        for (std::size_t c = 0; c < freq.size(); ++c)
            freq[c] += static_cast<double>(counts[c]) / static_cast<double>(walk_steps);
    }
    for (double& f : freq) f /= static_cast<double>(trials);
    return freq;
}

}  // namespace gsmab
