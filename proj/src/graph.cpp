#include "gsmab/graph.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>

namespace gsmab {

namespace {

constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

struct DisjointSets {
    std::vector<std::size_t> parent;
    std::size_t sets;

    explicit DisjointSets(std::size_t n) : parent(n), sets(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        --sets;
        return true;
    }
};

void check_node(std::size_t n, NodeId i) {
    if (i >= n) throw std::domain_error("node id " + std::to_string(i) + " out of range for N=" + std::to_string(n));
}

}  // namespace

Graph::Graph(std::size_t node_count, std::vector<Edge> edges) : adjacency_(node_count) {
    if (node_count == 0) throw std::domain_error("graph must have at least one node");
    for (auto& [a, b] : edges) {
        check_node(node_count, a);
        check_node(node_count, b);
        if (a == b) throw std::domain_error("self-loop at node " + std::to_string(a));
        if (a > b) std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw std::domain_error("duplicate edge");
    if (component_count(node_count, edges) != 1) throw std::domain_error("graph is not connected");

    for (const auto& [a, b] : edges) {
        adjacency_[a].push_back(b);
        adjacency_[b].push_back(a);
    }
    for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
    edges_ = std::move(edges);
}

const std::vector<NodeId>& Graph::neighbors(NodeId i) const {
    check_node(adjacency_.size(), i);
    return adjacency_[i];
}

std::size_t Graph::max_degree() const noexcept {
    std::size_t d = 0;
    for (const auto& nb : adjacency_) d = std::max(d, nb.size());
    return d;
}

bool Graph::has_edge(NodeId i, NodeId j) const {
    const auto& nb = neighbors(i);
    check_node(adjacency_.size(), j);
    return std::binary_search(nb.begin(), nb.end(), j);
}

std::size_t component_count(std::size_t node_count, const std::vector<Edge>& edges) {
    DisjointSets ds(node_count);
    for (const auto& [a, b] : edges) ds.unite(a, b);
    return ds.sets;
}

std::vector<std::uint32_t> bfs_distances(const Graph& g, NodeId source) {
    check_node(g.node_count(), source);
    std::vector<std::uint32_t> dist(g.node_count(), kUnreached);
    std::queue<NodeId> frontier;
    dist[source] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
        const NodeId u = frontier.front();
        frontier.pop();
        for (NodeId v : g.neighbors(u)) {
            if (dist[v] == kUnreached) {
                dist[v] = dist[u] + 1;
                frontier.push(v);
            }
        }
    }
    return dist;
}

std::uint32_t distance(const Graph& g, NodeId i, NodeId j) {
    check_node(g.node_count(), j);
    if (i == j) {
        check_node(g.node_count(), i);
        return 0;
    }
    return bfs_distances(g, i)[j];
}

std::vector<NodeId> ring(const Graph& g, NodeId i, std::uint32_t r) {
    if (r == 0) throw std::domain_error("ring radius must be >= 1");
    const auto dist = bfs_distances(g, i);
    std::vector<NodeId> out;
    for (std::size_t j = 0; j < dist.size(); ++j)
        if (dist[j] == r) out.push_back(static_cast<NodeId>(j));
    return out;
}

const std::vector<Edge>& incidence_rows(const Graph& g) noexcept { return g.edges(); }

DistanceTable::DistanceTable(const Graph& g) : n_(g.node_count()), dist_(n_ * n_) {
    for (std::size_t i = 0; i < n_; ++i) {
        const auto row = bfs_distances(g, static_cast<NodeId>(i));
        std::copy(row.begin(), row.end(), dist_.begin() + static_cast<std::ptrdiff_t>(i * n_));
    }
}

std::uint32_t DistanceTable::distance(NodeId i, NodeId j) const {
    check_node(n_, i);
    check_node(n_, j);
    return dist_[static_cast<std::size_t>(i) * n_ + j];
}

std::uint32_t DistanceTable::eccentricity(NodeId i) const {
    check_node(n_, i);
    const auto* row = dist_.data() + static_cast<std::size_t>(i) * n_;
    return *std::max_element(row, row + n_);
}

std::span<const std::uint32_t> DistanceTable::row(NodeId i) const {
    check_node(n_, i);
    return {dist_.data() + static_cast<std::size_t>(i) * n_, n_};
}

std::vector<NodeId> DistanceTable::ring(NodeId i, std::uint32_t r) const {
    if (r == 0) throw std::domain_error("ring radius must be >= 1");
    check_node(n_, i);
    std::vector<NodeId> out;
    for_each_in_ring(i, r, [&](NodeId j) { out.push_back(j); });
    return out;
}

Partition::Partition(std::vector<std::uint32_t> cluster_of) : cluster_of_(std::move(cluster_of)) {
    if (cluster_of_.empty()) throw std::domain_error("partition must cover at least one node");
    const std::size_t k = *std::max_element(cluster_of_.begin(), cluster_of_.end()) + std::size_t{1};
    clusters_.resize(k);
    for (std::size_t i = 0; i < cluster_of_.size(); ++i) clusters_[cluster_of_[i]].push_back(static_cast<NodeId>(i));
    for (const auto& c : clusters_)
        if (c.empty()) throw std::domain_error("partition has an empty cluster");
}

Partition Partition::from_sizes(const std::vector<std::size_t>& sizes) {
    std::vector<std::uint32_t> labels;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        if (sizes[c] == 0) throw std::domain_error("cluster size must be >= 1");
        labels.insert(labels.end(), sizes[c], static_cast<std::uint32_t>(c));
    }
    return Partition(std::move(labels));
}

void SbmConfig::validate() const {
    if (cluster_count < 1) throw std::domain_error("cluster_count must be >= 1");
    if (!(size_success_prob > 0.0 && size_success_prob <= 1.0))
        throw std::domain_error("size_success_prob must lie in (0, 1]");
    if (!(inter_prob >= 0.0 && inter_prob <= intra_prob && intra_prob <= 1.0))
        throw std::domain_error("SBM probabilities must satisfy 0 <= q <= p <= 1");
    if (max_regen_attempts < 1) throw std::domain_error("max_regen_attempts must be >= 1");
}

std::vector<std::size_t> draw_cluster_sizes(const SbmConfig& cfg, Rng& rng) {
    cfg.validate();
    // std::geometric_distribution counts failures before the first success.
    std::geometric_distribution<std::size_t> failures(cfg.size_success_prob);
    std::vector<std::size_t> sizes(cfg.cluster_count);
    for (auto& s : sizes) s = failures(rng) + 1;
    return sizes;
}

SbmDraw sbm_generate(const SbmConfig& cfg, const std::vector<std::size_t>& cluster_sizes, Rng& rng) {
    cfg.validate();
    const auto sizes = cluster_sizes.empty() ? draw_cluster_sizes(cfg, rng) : cluster_sizes;
    Partition partition = Partition::from_sizes(sizes);
    const std::size_t n = partition.node_count();
    const auto& label = partition.labels();

    std::bernoulli_distribution intra(cfg.intra_prob);
    std::bernoulli_distribution inter(cfg.inter_prob);
    std::vector<Edge> edges;
    std::size_t attempts = 0;
    while (attempts < cfg.max_regen_attempts) {
        ++attempts;
        edges.clear();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (label[i] == label[j] ? intra(rng) : inter(rng))
                    edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
        if (component_count(n, edges) == 1) return {Graph(n, std::move(edges)), std::move(partition), attempts, 0};
    }

    // Repair: join components with one edge each, drawn uniformly from the
    // node pairs that currently straddle two components.
    DisjointSets ds(n);
    for (const auto& [a, b] : edges) ds.unite(a, b);
    if (n < 2) throw GenerationError("cannot connect a single-node graph");
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::size_t added = 0;
    std::size_t guard = 0;
    while (ds.sets > 1) {
        if (++guard > 1000 * n * n) throw GenerationError("SBM repair failed to connect the graph");
        const std::size_t a = pick(rng);
        const std::size_t b = pick(rng);
        if (ds.find(a) == ds.find(b)) continue;
        ds.unite(a, b);
        edges.emplace_back(static_cast<NodeId>(std::min(a, b)), static_cast<NodeId>(std::max(a, b)));
        ++added;
    }
    return {Graph(n, std::move(edges)), std::move(partition), attempts, added};
}

void write_graph(std::ostream& os, const Graph& g) {
    os << g.node_count() << ' ' << g.edge_count() << '\n';
    for (const auto& [a, b] : g.edges()) os << a << ' ' << b << '\n';
}

Graph read_graph(std::istream& is) {
    std::size_t n = 0;
    std::size_t m = 0;
    if (!(is >> n >> m)) throw std::runtime_error("graph file: missing 'N M' header");
    std::vector<Edge> edges(m);
    for (auto& [a, b] : edges)
        if (!(is >> a >> b)) throw std::runtime_error("graph file: truncated edge list");
    return Graph(n, std::move(edges));
}

void write_partition(std::ostream& os, const Partition& p) {
    const auto& labels = p.labels();
    for (std::size_t i = 0; i < labels.size(); ++i) os << (i ? " " : "") << labels[i];
    os << '\n';
}

Partition read_partition(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("partition file: empty");
    std::istringstream ls(line);
    std::vector<std::uint32_t> labels;
    for (std::uint32_t c; ls >> c;) labels.push_back(c);
    return Partition(std::move(labels));
}

}  // namespace gsmab
