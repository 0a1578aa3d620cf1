#include "oracle.hpp"

#include "graphreason/error.hpp"
#include "graphreason/rng.hpp"

#include <algorithm>
#include <numeric>

namespace oracle {

using graphreason::Error;
using graphreason::ErrorKind;

namespace {

void guard(Task task, const Graph& g) {
    if (g.num_nodes() > node_limit(task)) {
        throw Error(ErrorKind::oracle_too_large, "oracle limit is " + std::to_string(node_limit(task)) + " nodes");
    }
}

// connectivity matrix after removing one undirected edge (or none)
std::vector<std::vector<bool>> closure(const Graph& g, int skip = -1) {
    const int n = g.num_nodes();
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) r[i][i] = true;
    int idx = 0;
    for (const auto& e : g.edges()) {
        if (idx++ == skip) continue;
        r[e.u][e.v] = true;
        if (!g.directed()) r[e.v][e.u] = true;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (r[i][k] && r[k][j]) r[i][j] = true;
    return r;
}

bool linked(const Graph& g, NodeId a, NodeId b) { return g.has_edge(a, b) || g.has_edge(b, a); }

void walk(const Graph& g, NodeId at, NodeId target, std::vector<bool>& used, long long sum, long long& best) {
    if (at == target) {
        if (best < 0 || sum < best) best = sum;
        return;
    }
    for (NodeId x = 0; x < g.num_nodes(); ++x) {
        if (used[x] || !g.has_edge(at, x)) continue;
        used[x] = true;
        walk(g, x, target, used, sum + g.edge_weight(at, x).value_or(1), best);
        used[x] = false;
    }
}

} // namespace

int node_limit(Task task) {
    switch (task) {
    case Task::flow: return 7;
    case Task::hamilton: return 9;
    default: return 10;
    }
}

bool has_cycle(const Graph& g) {
    // an undirected edge lies on a cycle iff its endpoints stay connected without it
    for (int i = 0; i < static_cast<int>(g.edge_count()); ++i) {
        const auto& e = g.edges()[i];
        if (closure(g, i)[e.u][e.v]) return true;
    }
    return false;
}

bool reachable(const Graph& g, NodeId u, NodeId v) { return closure(g)[u][v]; }

bool two_colourable(const Graph& g) {
    const int n = g.num_nodes();
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        bool ok = true;
        for (const auto& e : g.edges()) {
            if (((mask >> e.u) & 1u) == ((mask >> e.v) & 1u)) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

bool order_valid(const Graph& g, const std::vector<NodeId>& order) {
    const int n = g.num_nodes();
    if (static_cast<int>(order.size()) != n) return false;
    std::vector<int> pos(n, -1);
    for (int i = 0; i < n; ++i) {
        if (order[i] < 0 || order[i] >= n || pos[order[i]] >= 0) return false;
        pos[order[i]] = i;
    }
    for (const auto& e : g.edges()) {
        if (pos[e.u] > pos[e.v]) return false;
    }
    return true;
}

std::vector<std::vector<NodeId>> topological_orders(const Graph& g) {
    if (g.num_nodes() > 8) {
        throw Error(ErrorKind::oracle_too_large, "order enumeration is limited to 8 nodes");
    }
    std::vector<NodeId> perm(g.num_nodes());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<NodeId>> out;
    do {
        if (order_valid(g, perm)) out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

bool has_directed_cycle(const Graph& g) {
    const auto r = closure(g);
    for (const auto& e : g.edges()) {
        if (r[e.v][e.u]) return true;
    }
    return false;
}

long long shortest_weight(const Graph& g, NodeId u, NodeId v) {
    long long best = -1;
    std::vector<bool> used(g.num_nodes(), false);
    used[u] = true;
    walk(g, u, v, used, 0, best);
    return best;
}

long long max_triangle(const Graph& g) {
    const int n = g.num_nodes();
    long long best = -1;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c) {
                if (linked(g, a, b) && linked(g, b, c) && linked(g, a, c)) {
                    const auto& w = *g.node_weights();
                    best = std::max<long long>(best, w[a] + w[b] + w[c]);
                }
            }
    return best;
}

long long min_cut(const Graph& g, NodeId s, NodeId t) {
    const int n = g.num_nodes();
    long long best = -1;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (!((mask >> s) & 1u) || ((mask >> t) & 1u)) continue;
        long long cut = 0;
        for (const auto& e : g.edges()) {
            const bool a = (mask >> e.u) & 1u, b = (mask >> e.v) & 1u;
            if (a && !b) cut += e.weight.value_or(1);
            if (!g.directed() && b && !a) cut += e.weight.value_or(1);
        }
        if (best < 0 || cut < best) best = cut;
    }
    return best;
}

bool hamilton_valid(const Graph& g, const std::vector<NodeId>& path) {
    const int n = g.num_nodes();
    if (static_cast<int>(path.size()) != n) return false;
    std::vector<bool> seen(n, false);
    for (int i = 0; i < n; ++i) {
        if (path[i] < 0 || path[i] >= n || seen[path[i]]) return false;
        seen[path[i]] = true;
        if (i > 0 && !g.has_edge(path[i - 1], path[i])) return false;
    }
    return true;
}

bool hamilton_exists(const Graph& g) {
    std::vector<NodeId> perm(g.num_nodes());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        if (hamilton_valid(g, perm)) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

bool embeds(const Graph& host, const Graph& pattern) {
    const int k = pattern.num_nodes(), n = host.num_nodes();
    if (k > n) return false;
    std::vector<NodeId> map(k, -1);
    std::vector<bool> used(n, false);
    // plain enumeration of injective maps, edges checked only once complete
    auto rec = [&](auto&& self, int i) -> bool {
        if (i == k) {
            for (const auto& e : pattern.edges()) {
                if (!host.has_edge(map[e.u], map[e.v])) return false;
            }
            return true;
        }
        for (NodeId x = 0; x < n; ++x) {
            if (used[x]) continue;
            used[x] = true;
            map[i] = x;
            if (self(self, i + 1)) return true;
            used[x] = false;
        }
        return false;
    };
    return rec(rec, 0);
}

Answer solve(Task task, const Graph& g, const Query& q) {
    guard(task, g);
    auto number_or_none = [](long long x) { return x < 0 ? Answer::none() : Answer::numeric(x); };
    switch (task) {
    case Task::cycle: return Answer::boolean(has_cycle(g));
    case Task::connect: return Answer::boolean(reachable(g, *q.u, *q.v));
    case Task::bipartite: return Answer::boolean(two_colourable(g));
    case Task::topology: {
        if (has_directed_cycle(g)) return Answer::none();
        // beyond 8 nodes only existence is decided here; agrees() checks the order itself
        if (g.num_nodes() <= 8) return Answer::nodes(topological_orders(g).front());
        return Answer::nodes({});
    }
    case Task::shortest: return number_or_none(shortest_weight(g, *q.u, *q.v));
    case Task::triangle: return number_or_none(max_triangle(g));
    case Task::flow: return Answer::numeric(min_cut(g, *q.u, *q.v));
    case Task::hamilton: return Answer::boolean(hamilton_exists(g));
    case Task::subgraph: return Answer::boolean(embeds(g, *q.pattern));
    }
    return Answer::unknown();
}

bool agrees(Task task, const Graph& g, const Query& q, const Answer& got, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    const Answer want = solve(task, g, q);
    if (task == Task::topology && got.kind == graphreason::AnswerKind::node_sequence) {
        if (want.kind != got.kind) return fail("order returned for a cyclic graph");
        if (!order_valid(g, got.sequence)) return fail("returned order is not topological");
        if (g.num_nodes() > 8) return true;
    }
    if (!want.same_value(got)) return fail("expected " + graphreason::describe(want) + ", got " + graphreason::describe(got));
    if (task == Task::hamilton && got.yes && !hamilton_valid(g, got.witness.nodes)) {
        return fail("Hamilton witness does not check out");
    }
    if (task == Task::shortest && got.kind == graphreason::AnswerKind::numeric) {
        const auto& p = got.witness.nodes;
        long long sum = 0;
        for (std::size_t i = 1; i < p.size(); ++i) {
            auto w = g.edge_weight(p[i - 1], p[i]);
            if (!w) return fail("shortest-path witness uses a missing edge");
            sum += *w;
        }
        if (p.empty() || p.front() != *q.u || p.back() != *q.v || sum != got.number) {
            return fail("shortest-path witness does not add up");
        }
    }
    return true;
}


Instance random_instance(Task task, std::uint64_t seed, int max_nodes) {
    graphreason::Rng rng(seed);
    const int n = static_cast<int>(rng.uniform_int(2, std::max(2, max_nodes)));
    const double p = 0.1 + 0.8 * rng.unit();
    Instance in;
    in.graph = graphreason::generate_er(n, p, graphreason::task_is_directed(task), rng.next());
    auto pick_pair = [&] {
        const auto u = static_cast<NodeId>(rng.uniform_int(0, n - 1));
        auto v = static_cast<NodeId>(rng.uniform_int(0, n - 2));
        if (v >= u) ++v;
        in.query.u = u;
        in.query.v = v;
    };
    switch (task) {
    case Task::connect: pick_pair(); break;
    case Task::shortest:
        in.graph = graphreason::assign_edge_weights(std::move(in.graph), {1, 10}, rng.next());
        pick_pair();
        break;
    case Task::flow:
        in.graph = graphreason::assign_edge_weights(std::move(in.graph), {1, 10}, rng.next());
        pick_pair();
        break;
    case Task::triangle:
        in.graph = graphreason::assign_node_weights(std::move(in.graph), {1, 10}, rng.next());
        break;
    case Task::subgraph: {
        const int k = static_cast<int>(rng.uniform_int(2, std::min(4, n)));
        in.query.pattern = graphreason::generate_er(k, 0.3 + 0.6 * rng.unit(), true, rng.next());
        break;
    }
    default: break;
    }
    return in;
}

} // namespace oracle
