// graph.hpp — undirected simple connected graphs, SBM generation, hop rings.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gsmab {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;
using Rng = std::mt19937_64;

// Raised when SBM draws cannot be made connected.
class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Immutable undirected simple graph. Construction rejects self-loops,
// duplicate edges, out-of-range ids and disconnected inputs.
class Graph {
public:
    Graph(std::size_t node_count, std::vector<Edge> edges);

    std::size_t node_count() const noexcept { return adjacency_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    // Edges oriented low id -> high id, sorted lexicographically.
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<NodeId>& neighbors(NodeId i) const;
    std::size_t degree(NodeId i) const { return neighbors(i).size(); }
    std::size_t max_degree() const noexcept;

    bool has_edge(NodeId i, NodeId j) const;

private:
    std::vector<Edge> edges_;
    std::vector<std::vector<NodeId>> adjacency_;
};

// Number of connected components; usable on edge sets that do not yet form
// a valid Graph.
std::size_t component_count(std::size_t node_count, const std::vector<Edge>& edges);

// BFS hop distances from `source` to every node.
std::vector<std::uint32_t> bfs_distances(const Graph& g, NodeId source);

std::uint32_t distance(const Graph& g, NodeId i, NodeId j);

// Nodes at hop distance exactly r from i, ascending. Empty once r exceeds
// the eccentricity of i.
std::vector<NodeId> ring(const Graph& g, NodeId i, std::uint32_t r);

// Same as Graph::edges(); the row order of the edge-difference operator.
const std::vector<Edge>& incidence_rows(const Graph& g) noexcept;

// All-pairs hop distances (N*N entries). Optional accelerator for ring
// queries in hot loops.
class DistanceTable {
public:
    explicit DistanceTable(const Graph& g);

    std::size_t node_count() const noexcept { return n_; }
    std::uint32_t distance(NodeId i, NodeId j) const;
    std::uint32_t eccentricity(NodeId i) const;
    std::vector<NodeId> ring(NodeId i, std::uint32_t r) const;
    std::span<const std::uint32_t> row(NodeId i) const;

    // Nodes at distance r from i, without allocation.
    template <class F>
    void for_each_in_ring(NodeId i, std::uint32_t r, F&& f) const {
        const auto* row = dist_.data() + static_cast<std::size_t>(i) * n_;
        for (std::size_t j = 0; j < n_; ++j)
            if (row[j] == r) f(static_cast<NodeId>(j));
    }

private:
    std::size_t n_;
    std::vector<std::uint32_t> dist_;
};

class Partition {
public:
    // cluster_of[i] is the cluster index of node i. Cluster ids must be
    // 0..K-1 with no empty cluster.
    explicit Partition(std::vector<std::uint32_t> cluster_of);

    static Partition from_sizes(const std::vector<std::size_t>& sizes);

    std::size_t node_count() const noexcept { return cluster_of_.size(); }
    std::size_t cluster_count() const noexcept { return clusters_.size(); }
    std::uint32_t cluster_of(NodeId i) const { return cluster_of_.at(i); }
    const std::vector<std::uint32_t>& labels() const noexcept { return cluster_of_; }
    const std::vector<NodeId>& members(std::size_t c) const { return clusters_.at(c); }

    bool operator==(const Partition&) const = default;

private:
    std::vector<std::uint32_t> cluster_of_;
    std::vector<std::vector<NodeId>> clusters_;
};

struct SbmConfig {
    std::size_t cluster_count = 10;
    double size_success_prob = 0.08;
    double intra_prob = 0.7;
    double inter_prob = 0.01;
    std::size_t max_regen_attempts = 20;

    void validate() const;
};

struct SbmDraw {
    Graph graph;
    Partition partition;
    std::size_t attempts = 1;    // SBM draws consumed
    std::size_t repair_edges = 0;  // edges added to join components
};

// Cluster sizes i.i.d. geometric on {1, 2, ...}.
std::vector<std::size_t> draw_cluster_sizes(const SbmConfig& cfg, Rng& rng);

// Draws a connected SBM graph. When `cluster_sizes` is empty the sizes are
// drawn from the geometric size law. Disconnected draws are regenerated up
// to cfg.max_regen_attempts times; after that the last draw is repaired by
// joining components with uniformly chosen inter-component edges.
SbmDraw sbm_generate(const SbmConfig& cfg, const std::vector<std::size_t>& cluster_sizes, Rng& rng);

// Text formats: "N M" header then one "i j" per line (0-based); partition is
// one line of N space-separated cluster indices.
void write_graph(std::ostream& os, const Graph& g);
Graph read_graph(std::istream& is);
void write_partition(std::ostream& os, const Partition& p);
Partition read_partition(std::istream& is);

}  // namespace gsmab
