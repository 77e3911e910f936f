// bandit.hpp — gradient multi-armed bandit over hop-distance actions, and the
// random-walk / uniform baselines.
//
// The agent builds a sampling set by repeatedly choosing a hop count a in
// {1..H} from a softmax policy and jumping to an unsampled node at exactly
// that distance. One recovery per episode yields the reward -MSE, which is
// credited to every action taken in the episode.
#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "gsmab/graph.hpp"
#include "gsmab/signal.hpp"
#include "gsmab/tv_recovery.hpp"

namespace gsmab {

// Hop actions are 1-based: weights[a - 1] belongs to action a.
struct Policy {
    std::vector<double> weights;

    static Policy uniform(std::size_t horizon) { return {std::vector<double>(horizon, 0.0)}; }
    // Policy whose softmax is `probs` (weights are log-probabilities).
    static Policy from_distribution(std::span<const double> probs);

    std::size_t horizon() const noexcept { return weights.size(); }
};

// Softmax with max-shift.
std::vector<double> action_probabilities(const Policy& p);

struct Episode {
    std::vector<NodeId> nodes;   // sampling order, nodes[0] is the start
    std::vector<int> actions;    // realized hop action per transition, size M-1
    std::optional<double> reward;
};

struct TrainerConfig {
    std::size_t budget = 25;      // M
    std::size_t horizon = 4;      // H
    double learn_rate = 0.05;     // alpha
    std::size_t batch_size = 10;  // B
    std::size_t episodes = 2000;
    double rmsprop_decay = 0.9;
    double rmsprop_eps = 1e-8;
    // Stop once the batch-mean reward moved less than this over the last
    // 10 batches. Zero disables early stopping.
    double early_stop_threshold = 0.0;

    void validate() const;
};

struct TrainerState {
    std::vector<double> grad;
    std::vector<double> second_moment;
    std::size_t episode_count = 0;

    static TrainerState fresh(std::size_t horizon) {
        return {std::vector<double>(horizon, 0.0), std::vector<double>(horizon, 0.0), 0};
    }
};

// Builds a sampling set of `budget` distinct nodes. Each step draws a hop a
// from the policy and moves to a uniformly chosen unsampled node of the
// a-ring. If that ring has nothing left the action is redrawn among the
// untried ones; if every ring up to H is exhausted the agent jumps to a
// nearest unsampled node and records min(distance, H).
Episode run_episode(const DistanceTable& dist, const Policy& p, std::size_t budget, Rng& rng,
                    std::optional<NodeId> start = std::nullopt);
Episode run_episode(const Graph& g, const Policy& p, std::size_t budget, Rng& rng,
                    std::optional<NodeId> start = std::nullopt);

// -MSE(truth, recovered).
double episode_reward(const GraphSignal& truth, const GraphSignal& recovered);

// Adds the per-action increments for every recorded action using the
// episode's single reward. Does not touch episode_count.
void accumulate_gradient(TrainerState& state, const Policy& p, const Episode& episode);

// RMSprop step: g <- d*g + (1-d)*grad^2; w <- w + alpha*grad/(sqrt(g)+eps);
// grad <- 0.
void apply_batch_update(Policy& p, TrainerState& state, const TrainerConfig& cfg);

struct TrainingRun {
    Policy policy;
    std::vector<double> rewards;  // one per episode
};

TrainingRun train_on_graph(const Graph& g, const GraphSignal& truth, const TrainerConfig& cfg,
                           const SolverConfig& solver, Rng& rng);

// Arithmetic mean of the policies' action distributions.
std::vector<double> mean_policy(std::span<const Policy> policies);

// M distinct nodes drawn uniformly without replacement.
std::vector<NodeId> sample_urs(const Graph& g, std::size_t budget, Rng& rng);

// Simple random walk from a uniform start; every first visit is sampled
// until `budget` distinct nodes are collected.
std::vector<NodeId> sample_rws(const Graph& g, std::size_t budget, Rng& rng,
                               std::optional<NodeId> start = std::nullopt);

// Text record: H on the first line, then H weights at 17 digits.
void write_policy(std::ostream& os, const Policy& p);
Policy read_policy(std::istream& is);

}  // namespace gsmab
