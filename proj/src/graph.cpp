#include "graphreason/graph.hpp"

#include "graphreason/digest.hpp"
#include "graphreason/error.hpp"
#include "graphreason/rng.hpp"

#include <algorithm>
#include <tuple>

namespace graphreason {

Graph::Graph(int num_nodes, bool directed) : num_nodes_(num_nodes), directed_(directed) {
    if (num_nodes < 0 || num_nodes > kMaxNodes) {
        throw Error(ErrorKind::invalid_spec,
                    "node count " + std::to_string(num_nodes) + " outside [0, " + std::to_string(kMaxNodes) + "]");
    }
    index_.assign(static_cast<std::size_t>(num_nodes) * static_cast<std::size_t>(num_nodes), 0);
}

bool Graph::add_edge(NodeId u, NodeId v, std::optional<int> weight) {
    if (u < 0 || v < 0 || u >= num_nodes_ || v >= num_nodes_) {
        throw Error(ErrorKind::invalid_spec, "edge (" + std::to_string(u) + "," + std::to_string(v) +
                                                 ") references a node outside 0.." +
                                                 std::to_string(num_nodes_ - 1));
    }
    if (u == v) {
        throw Error(ErrorKind::invalid_spec, "self-loop on node " + std::to_string(u));
    }
    if (weight && *weight < 1) {
        throw Error(ErrorKind::invalid_spec, "edge weight must be >= 1");
    }
    if (!directed_ && u > v) {
        std::swap(u, v);
    }
    if (index_[slot(u, v)] != 0) {
        return false;
    }
    edges_.push_back({u, v, weight});
    const auto id = static_cast<std::uint32_t>(edges_.size());
    index_[slot(u, v)] = id;
    if (!directed_) {
        index_[slot(v, u)] = id;
    }
    return true;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    if (u < 0 || v < 0 || u >= num_nodes_ || v >= num_nodes_) {
        return false;
    }
    return index_[slot(u, v)] != 0;
}

std::optional<int> Graph::edge_weight(NodeId u, NodeId v) const {
    if (!has_edge(u, v)) {
        return std::nullopt;
    }
    return edges_[index_[slot(u, v)] - 1].weight;
}

void Graph::set_edge_weight(std::size_t edge_index, int weight) {
    if (weight < 1) {
        throw Error(ErrorKind::invalid_spec, "edge weight must be >= 1");
    }
    edges_.at(edge_index).weight = weight;
}

bool Graph::has_all_edge_weights() const {
    return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.weight.has_value(); });
}

bool Graph::has_any_edge_weight() const {
    return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.weight.has_value(); });
}

void Graph::set_node_weights(std::vector<int> weights) {
    if (static_cast<int>(weights.size()) != num_nodes_) {
        throw Error(ErrorKind::invalid_spec, "node weight count does not match node count");
    }
    if (std::any_of(weights.begin(), weights.end(), [](int w) { return w < 1; })) {
        throw Error(ErrorKind::invalid_spec, "node weights must be >= 1");
    }
    node_weights_ = std::move(weights);
}

std::vector<std::vector<NodeId>> Graph::adjacency() const {
    std::vector<std::vector<NodeId>> adj(static_cast<std::size_t>(num_nodes_));
    for (const auto& e : edges_) {
        adj[e.u].push_back(e.v);
        if (!directed_) {
            adj[e.v].push_back(e.u);
        }
    }
    return adj;
}

std::vector<std::vector<NodeId>> Graph::undirected_adjacency() const {
    std::vector<std::vector<NodeId>> adj(static_cast<std::size_t>(num_nodes_));
    for (const auto& e : edges_) {
        // a directed pair u->v, v->u appears once per direction; skip the repeat
        if (directed_ && e.u > e.v && has_edge(e.v, e.u)) {
            continue;
        }
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    return adj;
}

bool Graph::operator==(const Graph& other) const {
    return num_nodes_ == other.num_nodes_ && directed_ == other.directed_ && edges_ == other.edges_ &&
           node_weights_ == other.node_weights_;
}

void Graph::rebuild(std::vector<Edge> edges) {
    edges_.clear();
    std::fill(index_.begin(), index_.end(), 0);
    for (const auto& e : edges) {
        add_edge(e.u, e.v, e.weight);
    }
}

std::optional<std::string> check_graph(const Graph& g) {
    const int n = g.num_nodes();
    if (n < 0 || n > kMaxNodes) {
        return "node count outside [0, 100]";
    }
    std::vector<std::pair<int, int>> seen;
    for (const auto& e : g.edges()) {
        if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
            return "edge endpoint out of range";
        }
        if (e.u == e.v) {
            return "self-loop";
        }
        if (!g.directed() && e.u > e.v) {
            return "undirected edge not stored with u < v";
        }
        if (e.weight && *e.weight < 1) {
            return "non-positive edge weight";
        }
        seen.emplace_back(e.u, e.v);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
        return "duplicate edge";
    }
    if (const auto& w = g.node_weights()) {
        if (static_cast<int>(w->size()) != n) {
            return "node weight count mismatch";
        }
        if (std::any_of(w->begin(), w->end(), [](int x) { return x < 1; })) {
            return "non-positive node weight";
        }
    }
    return std::nullopt;
}

Graph generate_er(int n, double p, bool directed, std::uint64_t seed) {
    if (n < 2 || n > kMaxNodes) {
        throw Error(ErrorKind::invalid_spec, "ER node count " + std::to_string(n) + " outside [2, 100]");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorKind::invalid_spec, "ER edge probability must lie in [0, 1]");
    }
    Rng rng(seed);
    Graph g(n, directed);
    for (int u = 0; u < n; ++u) {
        for (int v = directed ? 0 : u + 1; v < n; ++v) {
            if (u == v) {
                continue;
            }
            if (rng.bernoulli(p)) {
                g.add_edge(u, v);
            }
        }
    }
    return g;
}

Graph assign_edge_weights(Graph g, WeightRange range, std::uint64_t seed) {
    if (range.min < 1 || range.max < range.min) {
        throw Error(ErrorKind::invalid_spec, "edge weight range must be non-empty with min >= 1");
    }
    Rng rng(seed);
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        g.set_edge_weight(i, static_cast<int>(rng.uniform_int(range.min, range.max)));
    }
    return g;
}

Graph assign_node_weights(Graph g, WeightRange range, std::uint64_t seed) {
    if (range.min < 1 || range.max < range.min) {
        throw Error(ErrorKind::invalid_spec, "node weight range must be non-empty with min >= 1");
    }
    Rng rng(seed);
    std::vector<int> w(static_cast<std::size_t>(g.num_nodes()));
    for (auto& x : w) {
        x = static_cast<int>(rng.uniform_int(range.min, range.max));
    }
    g.set_node_weights(std::move(w));
    return g;
}

std::string canonical_key(const Graph& g) {
    std::vector<std::tuple<int, int, int>> edges;
    edges.reserve(g.edge_count());
    for (const auto& e : g.edges()) {
        edges.emplace_back(e.u, e.v, e.weight.value_or(0));
    }
    std::sort(edges.begin(), edges.end());
    std::string s = "n=" + std::to_string(g.num_nodes()) + ";d=" + (g.directed() ? "1" : "0") + ";e=";
    for (const auto& [u, v, w] : edges) {
        s += std::to_string(u) + ',' + std::to_string(v) + ',' + std::to_string(w) + '|';
    }
    s += ";w=";
    if (const auto& nw = g.node_weights()) {
        for (int x : *nw) {
            s += std::to_string(x) + ',';
        }
    } else {
        s += '-';
    }
    return sha256_hex(s);
}

} // namespace graphreason
