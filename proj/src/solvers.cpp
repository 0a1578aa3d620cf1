#include "graphreason/solvers.hpp"

#include "graphreason/error.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>

namespace graphreason {

namespace {

void require_node(const Graph& g, NodeId x, const char* what) {
    if (x < 0 || x >= g.num_nodes()) {
        throw Error(ErrorKind::invalid_query, std::string(what) + " node " + std::to_string(x) + " is out of range");
    }
}

void require_undirected(const Graph& g, const char* task) {
    if (g.directed()) {
        throw Error(ErrorKind::wrong_graph_kind, std::string(task) + " expects an undirected graph");
    }
}

std::vector<NodeId> trace_back(const std::vector<NodeId>& parent, NodeId from, NodeId to) {
    std::vector<NodeId> path;
    for (NodeId x = to; x != -1; x = parent[x]) {
        path.push_back(x);
        if (x == from) {
            break;
        }
    }
    std::reverse(path.begin(), path.end());
    return path;
}

/// Fixed 128-bit node set; graphs never exceed 100 nodes.
struct NodeSet {
    std::uint64_t w[2] = {0, 0};

    void set(int i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(int i) { w[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(int i) const { return (w[i >> 6] >> (i & 63)) & 1U; }
    int count() const { return std::popcount(w[0]) + std::popcount(w[1]); }
    bool empty() const { return (w[0] | w[1]) == 0; }
    NodeSet operator&(const NodeSet& o) const { return {{w[0] & o.w[0], w[1] & o.w[1]}}; }
    NodeSet operator|(const NodeSet& o) const { return {{w[0] | o.w[0], w[1] | o.w[1]}}; }
    NodeSet without(const NodeSet& o) const { return {{w[0] & ~o.w[0], w[1] & ~o.w[1]}}; }

    template <typename F>
    void for_each(F f) const {
        for (int k = 0; k < 2; ++k) {
            std::uint64_t bits = w[k];
            while (bits) {
                const int b = std::countr_zero(bits);
                f(k * 64 + b);
                bits &= bits - 1;
            }
        }
    }
};

NodeSet full_set(int n) {
    NodeSet s;
    for (int i = 0; i < n; ++i) {
        s.set(i);
    }
    return s;
}

std::vector<NodeSet> adjacency_sets(const Graph& g) {
    std::vector<NodeSet> adj(static_cast<std::size_t>(g.num_nodes()));
    for (const auto& e : g.edges()) {
        adj[e.u].set(e.v);
        adj[e.v].set(e.u);
    }
    return adj;
}

bool connected_within(const std::vector<NodeSet>& adj, NodeSet region, int start) {
    NodeSet seen;
    seen.set(start);
    NodeSet frontier = seen;
    while (!frontier.empty()) {
        NodeSet next;
        frontier.for_each([&](int x) { next = next | adj[x]; });
        next = (next & region).without(seen);
        seen = seen | next;
        frontier = next;
    }
    return region.without(seen).empty();
}

// ---------------------------------------------------------------------------
// Hamilton path search

class HamiltonSearch {
public:
    HamiltonSearch(const std::vector<NodeSet>& adj, int n, std::uint64_t budget)
        : adj_(adj), n_(n), budget_(budget) {}

    enum class Outcome { found, exhausted, out_of_budget };

    Outcome run(const std::vector<NodeId>& starts) {
        for (NodeId s : starts) {
            path_.assign(1, s);
            NodeSet remaining = full_set(n_);
            remaining.reset(s);
            const auto r = extend(s, remaining);
            if (r != Outcome::exhausted) {
                return r;
            }
        }
        return Outcome::exhausted;
    }

    const std::vector<NodeId>& path() const { return path_; }

private:
    bool doomed(NodeId cur, const NodeSet& remaining) const {
        const int left = remaining.count();
        if (left <= 1) {
            return false;
        }
        bool dead = false;
        int forced_ends = 0;
        remaining.for_each([&](int w) {
            const int inside = (adj_[w] & remaining).count();
            if (inside == 0) {
                dead = true;
            } else if (inside == 1 && !adj_[cur].test(w)) {
                ++forced_ends;
            }
        });
        if (dead || forced_ends > 1) {
            return true;
        }
        NodeSet region = remaining;
        region.set(cur);
        return !connected_within(adj_, region, cur);
    }

    Outcome extend(NodeId cur, NodeSet remaining) {
        if (remaining.empty()) {
            return Outcome::found;
        }
        if (expansions_++ >= budget_) {
            return Outcome::out_of_budget;
        }
        if (doomed(cur, remaining)) {
            return Outcome::exhausted;
        }
        std::vector<std::pair<int, NodeId>> next;
        (adj_[cur] & remaining).for_each([&](int w) { next.emplace_back((adj_[w] & remaining).count(), w); });
        std::sort(next.begin(), next.end());
        for (const auto& [deg, w] : next) {
            path_.push_back(w);
            NodeSet rest = remaining;
            rest.reset(w);
            const auto r = extend(w, rest);
            if (r != Outcome::exhausted) {
                return r;
            }
            path_.pop_back();
        }
        return Outcome::exhausted;
    }

    const std::vector<NodeSet>& adj_;
    int n_;
    std::uint64_t budget_;
    std::uint64_t expansions_ = 0;
    std::vector<NodeId> path_;
};

std::optional<std::vector<NodeId>> hamilton_dp(const std::vector<NodeSet>& adj, int n) {
    std::vector<std::uint32_t> mask_adj(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        mask_adj[i] = static_cast<std::uint32_t>(adj[i].w[0]);
    }
    const std::uint32_t full = (n == 32) ? ~0U : ((1U << n) - 1);
    // ends[mask] = set of nodes v such that some path covers exactly mask and ends at v
    std::vector<std::uint32_t> ends(static_cast<std::size_t>(full) + 1, 0);
    for (int v = 0; v < n; ++v) {
        ends[1U << v] = 1U << v;
    }
    for (std::uint32_t mask = 1; mask <= full && mask != 0; ++mask) {
        std::uint32_t e = ends[mask];
        while (e) {
            const int v = std::countr_zero(e);
            e &= e - 1;
            std::uint32_t ext = mask_adj[v] & ~mask;
            while (ext) {
                const int w = std::countr_zero(ext);
                ext &= ext - 1;
                ends[mask | (1U << w)] |= 1U << w;
            }
        }
        if (mask == full) {
            break;
        }
    }
    if (ends[full] == 0) {
        return std::nullopt;
    }
    std::vector<NodeId> path;
    std::uint32_t mask = full;
    int v = std::countr_zero(ends[full]);
    path.push_back(v);
    while (std::popcount(mask) > 1) {
        const std::uint32_t prev = mask ^ (1U << v);
        const std::uint32_t cand = ends[prev] & mask_adj[v];
        v = std::countr_zero(cand);
        path.push_back(v);
        mask = prev;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

// ---------------------------------------------------------------------------
// Dinic

class Dinic {
public:
    explicit Dinic(int n) : graph_(static_cast<std::size_t>(n)), level_(static_cast<std::size_t>(n)), it_(static_cast<std::size_t>(n)) {}

    void add_arc(int from, int to, std::int64_t cap) {
        graph_[from].push_back({to, graph_[to].size(), cap});
        graph_[to].push_back({from, graph_[from].size() - 1, 0});
    }

    std::int64_t run(int s, int t) {
        std::int64_t total = 0;
        while (bfs(s, t)) {
            std::fill(it_.begin(), it_.end(), 0);
            while (auto pushed = dfs(s, t, std::numeric_limits<std::int64_t>::max())) {
                total += pushed;
            }
        }
        return total;
    }

private:
    struct Arc {
        int to;
        std::size_t rev;
        std::int64_t cap;
    };

    bool bfs(int s, int t) {
        std::fill(level_.begin(), level_.end(), -1);
        std::queue<int> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            const int x = q.front();
            q.pop();
            for (const auto& a : graph_[x]) {
                if (a.cap > 0 && level_[a.to] < 0) {
                    level_[a.to] = level_[x] + 1;
                    q.push(a.to);
                }
            }
        }
        return level_[t] >= 0;
    }

    std::int64_t dfs(int x, int t, std::int64_t limit) {
        if (x == t) {
            return limit;
        }
        for (auto& i = it_[x]; i < graph_[x].size(); ++i) {
            auto& a = graph_[x][i];
            if (a.cap <= 0 || level_[a.to] != level_[x] + 1) {
                continue;
            }
            if (const auto d = dfs(a.to, t, std::min(limit, a.cap)); d > 0) {
                a.cap -= d;
                graph_[a.to][a.rev].cap += d;
                return d;
            }
        }
        return 0;
    }

    std::vector<std::vector<Arc>> graph_;
    std::vector<int> level_;
    std::vector<std::size_t> it_;
};

// ---------------------------------------------------------------------------
// Subgraph monomorphism

class Matcher {
public:
    Matcher(const Graph& host, const Graph& pattern) : host_(host), pattern_(pattern) {
        const int k = pattern.num_nodes();
        const int n = host.num_nodes();
        pout_.assign(k, 0);
        pin_.assign(k, 0);
        hout_.assign(n, 0);
        hin_.assign(n, 0);
        for (const auto& e : pattern.edges()) {
            ++pout_[e.u];
            ++pin_[e.v];
            if (!pattern.directed()) {
                ++pout_[e.v];
                ++pin_[e.u];
            }
        }
        for (const auto& e : host.edges()) {
            ++hout_[e.u];
            ++hin_[e.v];
            if (!host.directed()) {
                ++hout_[e.v];
                ++hin_[e.u];
            }
        }
        order_ = match_order();
        mapping_.assign(k, -1);
        used_.assign(n, false);
    }

    bool run() { return place(0); }
    const std::vector<NodeId>& mapping() const { return mapping_; }

private:
    std::vector<NodeId> match_order() const {
        const int k = pattern_.num_nodes();
        const auto padj = pattern_.undirected_adjacency();
        std::vector<NodeId> order;
        std::vector<bool> placed(k, false);
        std::vector<int> links(k, 0);
        for (int step = 0; step < k; ++step) {
            int best = -1;
            for (int i = 0; i < k; ++i) {
                if (placed[i]) continue;
                if (best < 0 || links[i] > links[best] ||
                    (links[i] == links[best] && padj[i].size() > padj[best].size())) {
                    best = i;
                }
            }
            placed[best] = true;
            order.push_back(best);
            for (NodeId x : padj[best]) {
                ++links[x];
            }
        }
        return order;
    }

    bool consistent(NodeId p, NodeId h) const {
        if (hout_[h] < pout_[p] || hin_[h] < pin_[p]) {
            return false;
        }
        for (int q = 0; q < pattern_.num_nodes(); ++q) {
            const NodeId hq = mapping_[q];
            if (hq < 0) continue;
            if (pattern_.has_edge(p, q) && !host_.has_edge(h, hq)) return false;
            if (pattern_.has_edge(q, p) && !host_.has_edge(hq, h)) return false;
        }
        return true;
    }

    bool place(std::size_t depth) {
        if (depth == order_.size()) {
            return true;
        }
        const NodeId p = order_[depth];
        for (NodeId h = 0; h < host_.num_nodes(); ++h) {
            if (used_[h] || !consistent(p, h)) continue;
            mapping_[p] = h;
            used_[h] = true;
            if (place(depth + 1)) {
                return true;
            }
            used_[h] = false;
            mapping_[p] = -1;
        }
        return false;
    }

    const Graph& host_;
    const Graph& pattern_;
    std::vector<int> pout_, pin_, hout_, hin_;
    std::vector<NodeId> order_;
    std::vector<NodeId> mapping_;
    std::vector<bool> used_;
};

} // namespace

Answer detect_cycle(const Graph& g) {
    require_undirected(g, "cycle detection");
    const int n = g.num_nodes();
    const auto adj = g.adjacency();
    std::vector<NodeId> parent(n, -1);
    std::vector<bool> seen(n, false);
    for (NodeId root = 0; root < n; ++root) {
        if (seen[root]) continue;
        std::vector<std::pair<NodeId, std::size_t>> stack{{root, 0}};
        seen[root] = true;
        while (!stack.empty()) {
            auto& [x, next] = stack.back();
            if (next == adj[x].size()) {
                stack.pop_back();
                continue;
            }
            const NodeId w = adj[x][next++];
            if (w == parent[x]) continue;
            if (seen[w]) {
                // w is an ancestor of x on the DFS stack
                auto cycle = trace_back(parent, w, x);
                cycle.push_back(w);
                return Answer::boolean(true, {WitnessKind::cycle, std::move(cycle)});
            }
            seen[w] = true;
            parent[w] = x;
            stack.emplace_back(w, 0);
        }
    }
    return Answer::boolean(false);
}

Answer is_connected(const Graph& g, NodeId u, NodeId v) {
    require_node(g, u, "query");
    require_node(g, v, "query");
    if (u == v) {
        return Answer::boolean(true, {WitnessKind::path, {u}});
    }
    const auto adj = g.adjacency();
    std::vector<NodeId> parent(g.num_nodes(), -1);
    std::vector<bool> seen(g.num_nodes(), false);
    std::deque<NodeId> q{u};
    seen[u] = true;
    while (!q.empty()) {
        const NodeId x = q.front();
        q.pop_front();
        for (NodeId w : adj[x]) {
            if (seen[w]) continue;
            seen[w] = true;
            parent[w] = x;
            if (w == v) {
                return Answer::boolean(true, {WitnessKind::path, trace_back(parent, u, v)});
            }
            q.push_back(w);
        }
    }
    return Answer::boolean(false);
}

Answer is_bipartite(const Graph& g) {
    const int n = g.num_nodes();
    const auto adj = g.undirected_adjacency();
    std::vector<int> color(n, -1);
    std::vector<NodeId> parent(n, -1);
    std::vector<int> depth(n, 0);
    for (NodeId root = 0; root < n; ++root) {
        if (color[root] >= 0) continue;
        color[root] = 0;
        std::deque<NodeId> q{root};
        while (!q.empty()) {
            const NodeId x = q.front();
            q.pop_front();
            for (NodeId y : adj[x]) {
                if (color[y] < 0) {
                    color[y] = 1 - color[x];
                    parent[y] = x;
                    depth[y] = depth[x] + 1;
                    q.push_back(y);
                } else if (color[y] == color[x]) {
                    // climb both tree paths to their lowest common ancestor
                    std::vector<NodeId> left{x}, right{y};
                    NodeId a = x, b = y;
                    while (depth[a] > depth[b]) left.push_back(a = parent[a]);
                    while (depth[b] > depth[a]) right.push_back(b = parent[b]);
                    while (a != b) {
                        left.push_back(a = parent[a]);
                        right.push_back(b = parent[b]);
                    }
                    right.pop_back();
                    std::reverse(left.begin(), left.end());
                    left.insert(left.end(), right.begin(), right.end());
                    return Answer::boolean(false, {WitnessKind::odd_cycle, std::move(left)});
                }
            }
        }
    }
    std::vector<NodeId> side(color.begin(), color.end());
    return Answer::boolean(true, {WitnessKind::partition, std::move(side)});
}

Answer topological_sort(const Graph& g) {
    if (!g.directed()) {
        throw Error(ErrorKind::wrong_graph_kind, "topological sort expects a directed graph");
    }
    const int n = g.num_nodes();
    const auto adj = g.adjacency();
    std::vector<int> indegree(n, 0);
    for (const auto& e : g.edges()) {
        ++indegree[e.v];
    }
    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
    for (NodeId x = 0; x < n; ++x) {
        if (indegree[x] == 0) ready.push(x);
    }
    std::vector<NodeId> order;
    order.reserve(n);
    while (!ready.empty()) {
        const NodeId x = ready.top();
        ready.pop();
        order.push_back(x);
        for (NodeId y : adj[x]) {
            if (--indegree[y] == 0) ready.push(y);
        }
    }
    if (static_cast<int>(order.size()) != n) {
        return Answer::none();
    }
    return Answer::nodes(std::move(order));
}

Answer shortest_path(const Graph& g, NodeId u, NodeId v) {
    require_undirected(g, "shortest path");
    if (!g.has_all_edge_weights()) {
        throw Error(ErrorKind::wrong_graph_kind, "shortest path requires a weight on every edge");
    }
    require_node(g, u, "query");
    require_node(g, v, "query");
    const int n = g.num_nodes();
    std::vector<std::vector<std::pair<NodeId, int>>> adj(n);
    for (const auto& e : g.edges()) {
        adj[e.u].emplace_back(e.v, *e.weight);
        adj[e.v].emplace_back(e.u, *e.weight);
    }
    constexpr auto kInf = std::numeric_limits<std::int64_t>::max();
    std::vector<std::int64_t> dist(n, kInf);
    std::vector<NodeId> parent(n, -1);
    using Item = std::pair<std::int64_t, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[u] = 0;
    heap.emplace(0, u);
    while (!heap.empty()) {
        const auto [d, x] = heap.top();
        heap.pop();
        if (d != dist[x]) continue;
        if (x == v) break;
        for (const auto& [y, w] : adj[x]) {
            if (d + w < dist[y]) {
                dist[y] = d + w;
                parent[y] = x;
                heap.emplace(dist[y], y);
            }
        }
    }
    if (dist[v] == kInf) {
        return Answer::none();
    }
    auto ans = Answer::numeric(dist[v], {WitnessKind::path, trace_back(parent, u, v)});
    ans.sequence = ans.witness.nodes;
    return ans;
}

Answer max_triangle_sum(const Graph& g) {
    const auto& weights = g.node_weights();
    if (!weights) {
        throw Error(ErrorKind::wrong_graph_kind, "maximum triangle sum requires node weights");
    }
    const auto adj = adjacency_sets(g);
    std::int64_t best = -1;
    std::vector<NodeId> witness;
    for (const auto& e : g.edges()) {
        const NodeId a = std::min(e.u, e.v);
        const NodeId b = std::max(e.u, e.v);
        (adj[a] & adj[b]).for_each([&](int c) {
            if (c <= b) return;
            const std::int64_t s = std::int64_t{(*weights)[a]} + (*weights)[b] + (*weights)[c];
            if (s > best) {
                best = s;
                witness = {a, b, c};
            }
        });
    }
    if (best < 0) {
        return Answer::none();
    }
    return Answer::numeric(best, {WitnessKind::triangle, std::move(witness)});
}

Answer max_flow(const Graph& g, NodeId s, NodeId t) {
    require_node(g, s, "source");
    require_node(g, t, "sink");
    if (s == t) {
        throw Error(ErrorKind::invalid_query, "maximum flow needs distinct source and sink");
    }
    if (!g.has_all_edge_weights()) {
        throw Error(ErrorKind::wrong_graph_kind, "maximum flow requires a capacity on every edge");
    }
    Dinic dinic(g.num_nodes());
    for (const auto& e : g.edges()) {
        dinic.add_arc(e.u, e.v, *e.weight);
        if (!g.directed()) {
            dinic.add_arc(e.v, e.u, *e.weight);
        }
    }
    return Answer::numeric(dinic.run(s, t));
}

Answer hamilton_path(const Graph& g, const HamiltonOptions& options) {
    const int n = g.num_nodes();
    if (n == 0) {
        return Answer::boolean(true, {WitnessKind::path, {}});
    }
    if (n == 1) {
        return Answer::boolean(true, {WitnessKind::path, {0}});
    }
    const auto adj = adjacency_sets(g);
    if (!connected_within(adj, full_set(n), 0)) {
        return Answer::boolean(false);
    }
    std::vector<NodeId> leaves;
    for (NodeId x = 0; x < n; ++x) {
        if (adj[x].count() == 1) leaves.push_back(x);
    }
    if (leaves.size() > 2) {
        return Answer::boolean(false);
    }

    std::vector<NodeId> starts;
    if (!leaves.empty()) {
        // any Hamilton path must end at a degree-1 node
        starts.push_back(leaves.front());
    } else {
        starts.resize(n);
        std::iota(starts.begin(), starts.end(), 0);
        std::stable_sort(starts.begin(), starts.end(),
                         [&](NodeId a, NodeId b) { return adj[a].count() < adj[b].count(); });
    }

    if (n <= std::min(options.dp_limit, 24)) {
        // cheap greedy probe first; the DP certifies the rest
        HamiltonSearch probe(adj, n, 20'000);
        if (probe.run(starts) == HamiltonSearch::Outcome::found) {
            return Answer::boolean(true, {WitnessKind::path, probe.path()});
        }
        if (auto path = hamilton_dp(adj, n)) {
            return Answer::boolean(true, {WitnessKind::path, std::move(*path)});
        }
        return Answer::boolean(false);
    }

    HamiltonSearch search(adj, n, options.budget);
    switch (search.run(starts)) {
    case HamiltonSearch::Outcome::found: return Answer::boolean(true, {WitnessKind::path, search.path()});
    case HamiltonSearch::Outcome::exhausted: return Answer::boolean(false);
    case HamiltonSearch::Outcome::out_of_budget: return Answer::unknown();
    }
    return Answer::unknown();
}

Answer subgraph_match(const Graph& g, const Graph& pattern) {
    if (pattern.num_nodes() > g.num_nodes()) {
        return Answer::boolean(false);
    }
    Matcher m(g, pattern);
    if (m.run()) {
        return Answer::boolean(true, {WitnessKind::mapping, m.mapping()});
    }
    return Answer::boolean(false);
}

Answer solve(Task task, const Graph& g, const Query& q, const HamiltonOptions& hamilton) {
    auto need = [&](const std::optional<NodeId>& x, const char* name) {
        if (!x) {
            throw Error(ErrorKind::invalid_query,
                        std::string(task_name(task)) + " query is missing '" + name + "'");
        }
        return *x;
    };
    switch (task) {
    case Task::cycle: return detect_cycle(g);
    case Task::connect: return is_connected(g, need(q.u, "u"), need(q.v, "v"));
    case Task::bipartite: return is_bipartite(g);
    case Task::topology: return topological_sort(g);
    case Task::shortest: return shortest_path(g, need(q.u, "u"), need(q.v, "v"));
    case Task::triangle: return max_triangle_sum(g);
    case Task::flow: return max_flow(g, need(q.u, "s"), need(q.v, "t"));
    case Task::hamilton: return hamilton_path(g, hamilton);
    case Task::subgraph:
        if (!q.pattern) {
            throw Error(ErrorKind::invalid_query, "subgraph query is missing its pattern graph");
        }
        return subgraph_match(g, *q.pattern);
    }
    throw Error(ErrorKind::invalid_spec, "unknown task");
}

} // namespace graphreason
