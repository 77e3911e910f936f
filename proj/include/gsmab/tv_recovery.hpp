// tv_recovery.hpp — recover a graph signal from samples by minimizing total
// variation subject to exact agreement on the sampled nodes.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gsmab/graph.hpp"
#include "gsmab/signal.hpp"

namespace gsmab {

// Observed values on a set of distinct nodes, in insertion order.
class SampleSet {
public:
    SampleSet() = default;

    // Values are read from `truth` at each node.
    static SampleSet from_nodes(std::span<const NodeId> nodes, const GraphSignal& truth);

    void add(NodeId node, double value);

    std::size_t size() const noexcept { return nodes_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }
    const std::vector<NodeId>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& values() const noexcept { return values_; }
    bool contains(NodeId node) const;

private:
    std::vector<NodeId> nodes_;
    std::vector<double> values_;
};

struct SolverConfig {
    std::size_t max_iters = 10000;
    // Stop once ||x_{k+1} - x_k|| / max(||x_k||, 1) drops below this.
    double rel_tol = 1e-7;
    // Primal/dual steps. Zero selects 1/sqrt(2 * max_degree) for both.
    double tau = 0.0;
    double sigma = 0.0;
};

struct RecoveryResult {
    GraphSignal signal;
    double objective = 0.0;  // total variation of `signal`
    std::size_t iterations = 0;
    bool converged = false;
};

// Primal-dual (Chambolle-Pock) iteration for
//   min ||D x||_1  s.t.  x[i] = observed[i] for every sampled i,
// with D the oriented edge-difference operator. Sampled coordinates are
// overwritten after every primal step, so the output is exactly feasible.
RecoveryResult recover(const Graph& g, const SampleSet& samples, const SolverConfig& cfg = {});

// True iff result.objective <= TV(truth_feasible) + tolerance. Any feasible
// signal bounds the optimum from above, so `false` exposes a solver defect.
// Throws std::domain_error if truth_feasible disagrees with the samples.
bool tv_objective_certificate(const Graph& g, const SampleSet& samples, const RecoveryResult& result,
                              const GraphSignal& truth_feasible, double tolerance = 1e-9);

}  // namespace gsmab
