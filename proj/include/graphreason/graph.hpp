#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace graphreason {

using NodeId = int;

inline constexpr int kMaxNodes = 100;

struct Edge {
    NodeId u = 0;
    NodeId v = 0;
    std::optional<int> weight;

    bool operator==(const Edge&) const = default;
};

/// Simple graph on nodes 0..num_nodes-1.
///
/// Undirected edges are stored with u < v. Self-loops and duplicate edges
/// are rejected. Edge order is insertion order, which is what rendering
/// emits, so two graphs compare equal only if their edge lists match
/// element for element.
class Graph {
public:
    Graph() = default;
    Graph(int num_nodes, bool directed);

    int num_nodes() const noexcept { return num_nodes_; }
    bool directed() const noexcept { return directed_; }
    std::span<const Edge> edges() const noexcept { return edges_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    /// Adds an edge. Returns false if it already exists (for undirected graphs,
    /// in either orientation). Throws Error(invalid_spec) on a self-loop,
    /// out-of-range endpoint, or a non-positive weight.
    bool add_edge(NodeId u, NodeId v, std::optional<int> weight = std::nullopt);

    /// Directed: u->v. Undirected: either orientation.
    bool has_edge(NodeId u, NodeId v) const;
    std::optional<int> edge_weight(NodeId u, NodeId v) const;
    void set_edge_weight(std::size_t edge_index, int weight);

    /// Removes every edge for which keep(edge) is false, preserving order.
    template <typename Pred>
    void retain_edges(Pred keep) {
        std::vector<Edge> kept;
        kept.reserve(edges_.size());
        for (const auto& e : edges_) {
            if (keep(e)) {
                kept.push_back(e);
            }
        }
        rebuild(std::move(kept));
    }

    bool has_all_edge_weights() const;
    bool has_any_edge_weight() const;

    const std::optional<std::vector<int>>& node_weights() const noexcept { return node_weights_; }
    /// Throws Error(invalid_spec) if the size mismatches or any weight is < 1.
    void set_node_weights(std::vector<int> weights);

    /// Out-neighbours for directed graphs, all neighbours for undirected ones.
    std::vector<std::vector<NodeId>> adjacency() const;
    /// Neighbours ignoring edge direction.
    std::vector<std::vector<NodeId>> undirected_adjacency() const;

    bool operator==(const Graph& other) const;

private:
    void rebuild(std::vector<Edge> edges);
    std::size_t slot(NodeId u, NodeId v) const {
        return static_cast<std::size_t>(u) * static_cast<std::size_t>(num_nodes_) + static_cast<std::size_t>(v);
    }

    int num_nodes_ = 0;
    bool directed_ = false;
    std::vector<Edge> edges_;
    std::optional<std::vector<int>> node_weights_;
    // edge index + 1 per ordered slot, 0 when absent; both slots set for undirected edges.
    std::vector<std::uint32_t> index_;
};

/// Checks every Graph invariant; returns a description of the first violation.
std::optional<std::string> check_graph(const Graph& g);

struct WeightRange {
    int min = 1;
    int max = 10;
};

/// Erdős–Rényi G(n, p): each unordered (undirected) or ordered (directed)
/// pair of distinct nodes gets an edge independently with probability p.
/// Pairs are visited in lexicographic order, so the edge list comes out sorted.
Graph generate_er(int n, double p, bool directed, std::uint64_t seed);

/// Draws an integer weight for every edge, uniform over range.
Graph assign_edge_weights(Graph g, WeightRange range, std::uint64_t seed);

/// Draws an integer weight for every node, uniform over range.
Graph assign_node_weights(Graph g, WeightRange range, std::uint64_t seed);

/// Stable digest of the labelled graph: node count, direction, sorted edges
/// with weights, node weights. Isomorphic but differently labelled graphs
/// get different keys.
std::string canonical_key(const Graph& g);

} // namespace graphreason
