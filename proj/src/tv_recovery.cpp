#include "gsmab/tv_recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gsmab {

SampleSet SampleSet::from_nodes(std::span<const NodeId> nodes, const GraphSignal& truth) {
    SampleSet s;
    for (NodeId i : nodes) {
        if (i >= truth.size()) throw std::domain_error("sample node " + std::to_string(i) + " out of range");
        s.add(i, truth[i]);
    }
    return s;
}

void SampleSet::add(NodeId node, double value) {
    if (contains(node)) throw std::domain_error("node " + std::to_string(node) + " sampled twice");
    if (!std::isfinite(value)) throw std::domain_error("sample values must be finite");
    nodes_.push_back(node);
    values_.push_back(value);
}

bool SampleSet::contains(NodeId node) const {
    return std::find(nodes_.begin(), nodes_.end(), node) != nodes_.end();
}

RecoveryResult recover(const Graph& g, const SampleSet& samples, const SolverConfig& cfg) {
    if (samples.empty()) throw std::domain_error("recover: sample set is empty");
    if (cfg.max_iters == 0 || !(cfg.rel_tol > 0.0)) throw std::domain_error("recover: invalid solver config");
    const std::size_t n = g.node_count();
    for (NodeId i : samples.nodes())
        if (i >= n) throw std::domain_error("recover: sample node " + std::to_string(i) + " out of range");

    const double lipschitz = std::sqrt(2.0 * static_cast<double>(std::max<std::size_t>(g.max_degree(), 1)));
    const double tau = cfg.tau > 0.0 ? cfg.tau : 1.0 / lipschitz;
    const double sigma = cfg.sigma > 0.0 ? cfg.sigma : 1.0 / lipschitz;

    const auto& rows = incidence_rows(g);
    const std::size_t m = rows.size();
    std::vector<NodeId> tail(m);
    std::vector<NodeId> head(m);
    for (std::size_t e = 0; e < m; ++e) {
        tail[e] = rows[e].first;
        head[e] = rows[e].second;
    }

    const auto& obs_nodes = samples.nodes();
    const auto& obs_values = samples.values();
    const double lo = *std::min_element(obs_values.begin(), obs_values.end());
    const double hi = *std::max_element(obs_values.begin(), obs_values.end());
    const double mean = std::accumulate(obs_values.begin(), obs_values.end(), 0.0) / static_cast<double>(samples.size());

    auto project = [&](std::vector<double>& x) {
        for (std::size_t k = 0; k < obs_nodes.size(); ++k) x[obs_nodes[k]] = obs_values[k];
    };

    std::vector<double> x(n, mean);
    project(x);
    std::vector<double> x_bar = x;
    std::vector<double> x_new(n);
    std::vector<double> y(m, 0.0);
    std::vector<double> dty(n);

    RecoveryResult out;
    if (samples.size() == n) {
        out.converged = true;
    } else {
        for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
            std::fill(dty.begin(), dty.end(), 0.0);
            double dual_change = 0.0;
            double dual_norm = 0.0;
            for (std::size_t e = 0; e < m; ++e) {
                const double v = std::clamp(y[e] + sigma * (x_bar[head[e]] - x_bar[tail[e]]), -1.0, 1.0);
                dual_change += (v - y[e]) * (v - y[e]);
                dual_norm += y[e] * y[e];
                y[e] = v;
                dty[head[e]] += v;
                dty[tail[e]] -= v;
            }
            double change = 0.0;
            double norm = 0.0;
            for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] - tau * dty[i];
            project(x_new);
            for (std::size_t i = 0; i < n; ++i) {
                const double d = x_new[i] - x[i];
                change += d * d;
                norm += x[i] * x[i];
                x_bar[i] = 2.0 * x_new[i] - x[i];
            }
            x.swap(x_new);
            out.iterations = it;
            // The primal iterate can stall while the dual is still moving, so
            // both must have settled.
            if (std::sqrt(change) / std::max(std::sqrt(norm), 1.0) < cfg.rel_tol &&
                std::sqrt(dual_change) / std::max(std::sqrt(dual_norm), 1.0) < cfg.rel_tol) {
                out.converged = true;
                break;
            }
        }
    }

    // Clipping into the observed range keeps feasibility and cannot raise TV.
    for (double& v : x) v = std::clamp(v, lo, hi);
    out.objective = total_variation(g, std::span<const double>(x));
    out.signal = GraphSignal(std::move(x));
    return out;
}

bool tv_objective_certificate(const Graph& g, const SampleSet& samples, const RecoveryResult& result,
                              const GraphSignal& truth_feasible, double tolerance) {
    if (truth_feasible.size() != g.node_count()) throw std::domain_error("certificate: signal length mismatch");
    for (std::size_t k = 0; k < samples.size(); ++k)
        if (truth_feasible[samples.nodes()[k]] != samples.values()[k])
            throw std::domain_error("certificate: reference signal violates sample constraints");
    return result.objective <= total_variation(g, truth_feasible) + tolerance;
}

}  // namespace gsmab
