#include "gsmab/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace gsmab {

namespace {

void check_budget(std::size_t budget, std::size_t n) {
    if (budget == 0) throw std::domain_error("sampling budget must be >= 1");
    if (budget > n)
        throw std::domain_error("sampling budget " + std::to_string(budget) + " exceeds node count " +
                                std::to_string(n));
}

// Index drawn from `probs` restricted to entries with allowed[k] set.
std::size_t draw_restricted(const std::vector<double>& probs, const std::vector<bool>& allowed, Rng& rng) {
    double mass = 0.0;
    std::size_t last = probs.size();
    for (std::size_t k = 0; k < probs.size(); ++k)
        if (allowed[k]) {
            mass += probs[k];
            last = k;
        }
    if (!(mass > 0.0)) {
        // Underflowed probabilities: fall back to a uniform choice.
        std::vector<std::size_t> open;
        for (std::size_t k = 0; k < probs.size(); ++k)
            if (allowed[k]) open.push_back(k);
        return open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
    }
    const double u = std::uniform_real_distribution<double>(0.0, mass)(rng);
    double acc = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (!allowed[k]) continue;
        acc += probs[k];
        if (u < acc) return k;
    }
    return last;
}

NodeId pick_uniform(const std::vector<NodeId>& from, Rng& rng) {
    return from[std::uniform_int_distribution<std::size_t>(0, from.size() - 1)(rng)];
}

// RowFn(i) returns the hop distances from i to every node.
template <class RowFn>
Episode run_episode_impl(std::size_t n, RowFn&& distances_from, const Policy& p, std::size_t budget, Rng& rng,
                         std::optional<NodeId> start) {
    check_budget(budget, n);
    const std::size_t horizon = p.horizon();
    if (horizon == 0) throw std::domain_error("policy has no actions");
    const auto probs = action_probabilities(p);

    Episode ep;
    ep.nodes.reserve(budget);
    ep.actions.reserve(budget - 1);
    std::vector<bool> sampled(n, false);

    NodeId current;
    if (start) {
        if (*start >= n) throw std::domain_error("start node out of range");
        current = *start;
    } else {
        current = static_cast<NodeId>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
    }
    sampled[current] = true;
    ep.nodes.push_back(current);

    std::vector<NodeId> candidates;
    std::vector<bool> untried(horizon);
    while (ep.nodes.size() < budget) {
        const auto dist = distances_from(current);
        std::fill(untried.begin(), untried.end(), true);
        std::size_t remaining = horizon;
        int action = 0;
        candidates.clear();
        while (remaining > 0) {
            const std::size_t k = draw_restricted(probs, untried, rng);
            const auto hop = static_cast<std::uint32_t>(k + 1);
            for (std::size_t j = 0; j < n; ++j)
                if (dist[j] == hop && !sampled[j]) candidates.push_back(static_cast<NodeId>(j));
            if (!candidates.empty()) {
                action = static_cast<int>(hop);
                break;
            }
            untried[k] = false;
            --remaining;
        }
        if (candidates.empty()) {
            // Every ring up to H is exhausted: jump to a nearest unsampled node.
            std::uint32_t nearest = std::numeric_limits<std::uint32_t>::max();
            for (std::size_t j = 0; j < n; ++j)
                if (!sampled[j]) nearest = std::min(nearest, dist[j]);
            for (std::size_t j = 0; j < n; ++j)
                if (!sampled[j] && dist[j] == nearest) candidates.push_back(static_cast<NodeId>(j));
            action = static_cast<int>(std::min<std::size_t>(nearest, horizon));
        }
        current = pick_uniform(candidates, rng);
        sampled[current] = true;
        ep.nodes.push_back(current);
        ep.actions.push_back(action);
    }
    return ep;
}

}  // namespace

Policy Policy::from_distribution(std::span<const double> probs) {
    Policy p;
    for (double v : probs) {
        if (!(v > 0.0)) throw std::domain_error("distribution entries must be positive");
        p.weights.push_back(std::log(v));
    }
    return p;
}

std::vector<double> action_probabilities(const Policy& p) {
    if (p.weights.empty()) return {};
    const double top = *std::max_element(p.weights.begin(), p.weights.end());
    std::vector<double> probs(p.weights.size());
    double total = 0.0;
    for (std::size_t a = 0; a < probs.size(); ++a) {
        probs[a] = std::exp(p.weights[a] - top);
        total += probs[a];
    }
    for (double& v : probs) v /= total;
    return probs;
}

void TrainerConfig::validate() const {
    if (budget == 0) throw std::domain_error("budget must be >= 1");
    if (horizon == 0) throw std::domain_error("horizon must be >= 1");
    if (!(learn_rate > 0.0)) throw std::domain_error("learn_rate must be positive");
    if (batch_size == 0) throw std::domain_error("batch_size must be >= 1");
    if (!(rmsprop_decay > 0.0 && rmsprop_decay < 1.0)) throw std::domain_error("rmsprop_decay must lie in (0, 1)");
    if (!(rmsprop_eps > 0.0)) throw std::domain_error("rmsprop_eps must be positive");
    if (early_stop_threshold < 0.0) throw std::domain_error("early_stop_threshold must be >= 0");
}

Episode run_episode(const DistanceTable& dist, const Policy& p, std::size_t budget, Rng& rng,
                    std::optional<NodeId> start) {
    return run_episode_impl(
        dist.node_count(), [&](NodeId i) { return dist.row(i); }, p, budget, rng, start);
}

Episode run_episode(const Graph& g, const Policy& p, std::size_t budget, Rng& rng, std::optional<NodeId> start) {
    return run_episode_impl(
        g.node_count(), [&](NodeId i) { return bfs_distances(g, i); }, p, budget, rng, start);
}

double episode_reward(const GraphSignal& truth, const GraphSignal& recovered) { return -mse(truth, recovered); }

void accumulate_gradient(TrainerState& state, const Policy& p, const Episode& episode) {
    if (!episode.reward) throw std::domain_error("episode reward is unset");
    const std::size_t horizon = p.horizon();
    if (state.grad.size() != horizon) throw std::domain_error("trainer state does not match policy horizon");
    const double reward = *episode.reward;
    const auto probs = action_probabilities(p);
    for (int chosen : episode.actions) {
        if (chosen < 1 || static_cast<std::size_t>(chosen) > horizon)
            throw std::domain_error("action " + std::to_string(chosen) + " outside 1.." + std::to_string(horizon));
        for (std::size_t a = 0; a < horizon; ++a) {
            if (a + 1 == static_cast<std::size_t>(chosen))
                state.grad[a] += reward * (1.0 - probs[a]);
            else
                state.grad[a] -= reward * probs[a];
        }
    }
}

void apply_batch_update(Policy& p, TrainerState& state, const TrainerConfig& cfg) {
    const std::size_t horizon = p.horizon();
    if (state.grad.size() != horizon || state.second_moment.size() != horizon)
        throw std::domain_error("trainer state does not match policy horizon");
    const double decay = cfg.rmsprop_decay;
    for (std::size_t a = 0; a < horizon; ++a) {
        const double g = state.grad[a];
        state.second_moment[a] = decay * state.second_moment[a] + (1.0 - decay) * g * g;
        p.weights[a] += cfg.learn_rate * g / (std::sqrt(state.second_moment[a]) + cfg.rmsprop_eps);
        state.grad[a] = 0.0;
    }
}

TrainingRun train_on_graph(const Graph& g, const GraphSignal& truth, const TrainerConfig& cfg,
                           const SolverConfig& solver, Rng& rng) {
    cfg.validate();
    check_budget(cfg.budget, g.node_count());
    if (truth.size() != g.node_count()) throw std::domain_error("truth signal length does not match graph");

    const DistanceTable dist(g);
    TrainingRun run{Policy::uniform(cfg.horizon), {}};
    run.rewards.reserve(cfg.episodes);
    auto state = TrainerState::fresh(cfg.horizon);

    constexpr std::size_t kWindow = 10;
    std::vector<double> batch_means;
    double batch_sum = 0.0;
    for (std::size_t e = 0; e < cfg.episodes; ++e) {
        Episode ep = run_episode(dist, run.policy, cfg.budget, rng);
        const auto samples = SampleSet::from_nodes(ep.nodes, truth);
        const auto rec = recover(g, samples, solver);
        ep.reward = episode_reward(truth, rec.signal);
        accumulate_gradient(state, run.policy, ep);
        run.rewards.push_back(*ep.reward);
        batch_sum += *ep.reward;
        ++state.episode_count;
        if (state.episode_count % cfg.batch_size == 0) {
            apply_batch_update(run.policy, state, cfg);
            batch_means.push_back(batch_sum / static_cast<double>(cfg.batch_size));
            batch_sum = 0.0;
            if (cfg.early_stop_threshold > 0.0 && batch_means.size() > kWindow) {
                const double moved = std::abs(batch_means.back() - batch_means[batch_means.size() - 1 - kWindow]);
                if (moved < cfg.early_stop_threshold) break;
            }
        }
    }
    return run;
}

std::vector<double> mean_policy(std::span<const Policy> policies) {
    if (policies.empty()) throw std::domain_error("mean_policy: no policies");
    const std::size_t horizon = policies.front().horizon();
    std::vector<double> mean(horizon, 0.0);
    for (const auto& p : policies) {
        if (p.horizon() != horizon) throw std::domain_error("mean_policy: policies differ in horizon");
        const auto probs = action_probabilities(p);
        for (std::size_t a = 0; a < horizon; ++a) mean[a] += probs[a];
    }
    for (double& v : mean) v /= static_cast<double>(policies.size());
    return mean;
}

std::vector<NodeId> sample_urs(const Graph& g, std::size_t budget, Rng& rng) {
    const std::size_t n = g.node_count();
    check_budget(budget, n);
    std::vector<NodeId> pool(n);
    std::iota(pool.begin(), pool.end(), NodeId{0});
    for (std::size_t k = 0; k < budget; ++k) {
        const std::size_t j = std::uniform_int_distribution<std::size_t>(k, n - 1)(rng);
        std::swap(pool[k], pool[j]);
    }
    pool.resize(budget);
    return pool;
}

std::vector<NodeId> sample_rws(const Graph& g, std::size_t budget, Rng& rng, std::optional<NodeId> start) {
    const std::size_t n = g.node_count();
    check_budget(budget, n);
    NodeId current;
    if (start) {
        if (*start >= n) throw std::domain_error("start node out of range");
        current = *start;
    } else {
        current = static_cast<NodeId>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
    }
    std::vector<bool> visited(n, false);
    std::vector<NodeId> out{current};
    visited[current] = true;
    while (out.size() < budget) {
        current = pick_uniform(g.neighbors(current), rng);
        if (!visited[current]) {
            visited[current] = true;
            out.push_back(current);
        }
    }
    return out;
}

void write_policy(std::ostream& os, const Policy& p) {
    os << p.horizon() << '\n';
    char buf[32];
    for (double w : p.weights) {
        std::snprintf(buf, sizeof buf, "%.17g", w);
        os << buf << '\n';
    }
}

Policy read_policy(std::istream& is) {
    std::size_t horizon = 0;
    if (!(is >> horizon) || horizon == 0) throw std::runtime_error("policy file: missing horizon");
    Policy p;
    p.weights.resize(horizon);
    for (double& w : p.weights) {
        std::string token;
        if (!(is >> token)) throw std::runtime_error("policy file: truncated weights");
        w = std::stod(token);
        if (!std::isfinite(w)) throw std::runtime_error("policy file: non-finite weight");
    }
    return p;
}

}  // namespace gsmab
