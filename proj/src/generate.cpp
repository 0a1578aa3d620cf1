#include "graphreason/generate.hpp"

#include "graphreason/error.hpp"
#include "graphreason/parallel.hpp"
#include "graphreason/rng.hpp"
#include "graphreason/textgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace graphreason {

namespace {

constexpr std::array<double, kTierCount> kDensityCycle = {0.15, 0.3, 0.5, 0.15, 0.3};

// rough rendered bytes per edge tuple, separator included
double bytes_per_edge(Task task) {
    switch (task) {
    case Task::shortest: return 10.0;  // (12,34,5)
    case Task::flow: return 11.0;      // (12->34,5)
    case Task::triangle: return 9.0;   // (12, 34)
    case Task::bipartite:
    case Task::topology:
    case Task::subgraph: return 9.0;   // (12->34)
    default: return 8.0;               // (12,34)
    }
}

double candidate_pairs(Task task, int n) {
    const double pairs = n * (n - 1) / 2.0;
    // bipartite graphs draw every ordered pair independently
    return task == Task::bipartite ? 2.0 * pairs : pairs;
}

std::vector<int> component_ids(const Graph& g, int& count) {
    const auto adj = g.undirected_adjacency();
    std::vector<int> comp(g.num_nodes(), -1);
    count = 0;
    for (int root = 0; root < g.num_nodes(); ++root) {
        if (comp[root] >= 0) continue;
        std::vector<int> stack{root};
        comp[root] = count;
        while (!stack.empty()) {
            const int x = stack.back();
            stack.pop_back();
            for (int y : adj[x]) {
                if (comp[y] < 0) {
                    comp[y] = count;
                    stack.push_back(y);
                }
            }
        }
        ++count;
    }
    return comp;
}

NodeId pick(Rng& rng, const std::vector<NodeId>& nodes) {
    return nodes[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(nodes.size()) - 1))];
}

std::vector<NodeId> permutation(Rng& rng, int n) {
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(std::span<NodeId>(perm));
    return perm;
}

/// Pair (a, b), a != b, both drawn from `nodes` in random order.
std::pair<NodeId, NodeId> pick_pair(Rng& rng, std::vector<NodeId> nodes) {
    rng.shuffle(std::span<NodeId>(nodes));
    return {nodes[0], nodes[1]};
}

/// Undirected ER graph re-expressed as a DAG oriented from lower to higher id.
Graph ascending_dag(int n, double p, std::uint64_t seed) {
    const Graph base = generate_er(n, p, false, seed);
    Graph g(n, true);
    for (const auto& e : base.edges()) {
        g.add_edge(e.u, e.v);
    }
    return g;
}

void spanning_forest(Graph& g, Rng& rng) {
    std::vector<Edge> edges(g.edges().begin(), g.edges().end());
    rng.shuffle(std::span<Edge>(edges));
    std::vector<int> parent(g.num_nodes());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<bool> keep_slot(static_cast<std::size_t>(g.num_nodes()) * g.num_nodes(), false);
    for (const auto& e : edges) {
        const int a = find(e.u), b = find(e.v);
        if (a != b) {
            parent[a] = b;
            keep_slot[static_cast<std::size_t>(e.u) * g.num_nodes() + e.v] = true;
        }
    }
    const int n = g.num_nodes();
    g.retain_edges([&](const Edge& e) { return keep_slot[static_cast<std::size_t>(e.u) * n + e.v]; });
}

bool add_undirected_triangle(Graph& g, Rng& rng, bool directed) {
    if (g.num_nodes() < 3) return false;
    const auto perm = permutation(rng, g.num_nodes());
    const std::array<NodeId, 3> t = {perm[0], perm[1], perm[2]};
    for (int i = 0; i < 3; ++i) {
        const NodeId a = t[i], b = t[(i + 1) % 3];
        if (directed ? (!g.has_edge(a, b) && !g.has_edge(b, a)) : !g.has_edge(a, b)) {
            g.add_edge(a, b);
        }
    }
    return true;
}

Graph random_pattern(Rng& rng, int k) {
    Graph pat(k, true);
    for (int i = 1; i < k; ++i) {
        pat.add_edge(static_cast<NodeId>(rng.uniform_int(0, i - 1)), i);
    }
    for (int a = 0; a < k; ++a) {
        for (int b = a + 1; b < k; ++b) {
            if (!pat.has_edge(a, b) && rng.bernoulli(0.3)) {
                pat.add_edge(a, b);
            }
        }
    }
    // sorted edge order reads naturally in the rendered question
    std::vector<Edge> edges(pat.edges().begin(), pat.edges().end());
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return std::tie(x.u, x.v) < std::tie(y.u, y.v); });
    Graph sorted(k, true);
    for (const auto& e : edges) sorted.add_edge(e.u, e.v);
    return sorted;
}

bool meets(LabelTarget target, const Answer& a) {
    if (target == LabelTarget::any) return true;
    return a.kind == AnswerKind::yes_no && a.yes == (target == LabelTarget::yes);
}

struct Draft {
    Graph graph;
    Query query;
};

std::optional<Draft> draft_problem(const GenSpec& spec, Rng& rng, int n, double p, LabelTarget target) {
    const Task task = spec.task;
    switch (task) {
    case Task::cycle: {
        Graph g = generate_er(n, p, false, rng.next());
        const bool has = detect_cycle(g).yes;
        if (target == LabelTarget::yes && !has && !add_undirected_triangle(g, rng, false)) return std::nullopt;
        if (target == LabelTarget::no && has) spanning_forest(g, rng);
        return Draft{std::move(g), {}};
    }
    case Task::connect: {
        Graph g = generate_er(n, p, false, rng.next());
        int count = 0;
        auto comp = component_ids(g, count);
        if (target == LabelTarget::no && count == 1) {
            // cut the graph along a random bipartition of the nodes
            const auto perm = permutation(rng, n);
            const auto split = rng.uniform_int(1, n - 1);
            std::vector<int> side(n, 0);
            for (std::int64_t i = split; i < n; ++i) side[perm[i]] = 1;
            g.retain_edges([&](const Edge& e) { return side[e.u] == side[e.v]; });
            comp = component_ids(g, count);
        }
        std::vector<std::vector<NodeId>> members(count);
        for (NodeId x = 0; x < n; ++x) members[comp[x]].push_back(x);
        Query q;
        if (target == LabelTarget::no) {
            std::vector<int> ids(count);
            std::iota(ids.begin(), ids.end(), 0);
            rng.shuffle(std::span<int>(ids));
            q.u = pick(rng, members[ids[0]]);
            q.v = pick(rng, members[ids[1]]);
        } else {
            std::vector<int> big;
            for (int c = 0; c < count; ++c) {
                if (members[c].size() >= 2) big.push_back(c);
            }
            if (big.empty()) return std::nullopt;
            auto [a, b] = pick_pair(rng, members[pick(rng, big)]);
            q.u = a;
            q.v = b;
        }
        return Draft{std::move(g), std::move(q)};
    }
    case Task::bipartite: {
        Graph g = generate_er(n, p, true, rng.next());
        const bool bip = is_bipartite(g).yes;
        if (target == LabelTarget::yes && !bip) {
            std::vector<int> color(n);
            for (auto& c : color) c = rng.bernoulli(0.5) ? 1 : 0;
            g.retain_edges([&](const Edge& e) { return color[e.u] != color[e.v]; });
        }
        if (target == LabelTarget::no && bip && !add_undirected_triangle(g, rng, true)) return std::nullopt;
        return Draft{std::move(g), {}};
    }
    case Task::topology: {
        const Graph base = generate_er(n, p, false, rng.next());
        const auto perm = permutation(rng, n);
        Graph g(n, true);
        for (const auto& e : base.edges()) g.add_edge(perm[e.u], perm[e.v]);
        return Draft{std::move(g), {}};
    }
    case Task::shortest: {
        Graph g = assign_edge_weights(generate_er(n, p, false, rng.next()), spec.weight_range, rng.next());
        int count = 0;
        const auto comp = component_ids(g, count);
        std::vector<std::vector<NodeId>> members(count);
        for (NodeId x = 0; x < n; ++x) members[comp[x]].push_back(x);
        std::vector<int> big;
        for (int c = 0; c < count; ++c) {
            if (members[c].size() >= 2) big.push_back(c);
        }
        if (big.empty()) return std::nullopt;
        auto [a, b] = pick_pair(rng, members[pick(rng, big)]);
        Query q;
        q.u = a;
        q.v = b;
        return Draft{std::move(g), std::move(q)};
    }
    case Task::triangle: {
        Graph g = assign_node_weights(generate_er(n, p, false, rng.next()), spec.weight_range, rng.next());
        return Draft{std::move(g), {}};
    }
    case Task::flow: {
        Graph g = ascending_dag(n, p, rng.next());
        g = assign_edge_weights(std::move(g), spec.weight_range, rng.next());
        const auto adj = g.adjacency();
        std::vector<std::pair<NodeId, NodeId>> pairs;
        for (NodeId s = 0; s < n; ++s) {
            std::vector<bool> seen(n, false);
            std::vector<NodeId> stack{s};
            seen[s] = true;
            while (!stack.empty()) {
                const NodeId x = stack.back();
                stack.pop_back();
                for (NodeId y : adj[x]) {
                    if (!seen[y]) {
                        seen[y] = true;
                        stack.push_back(y);
                        pairs.emplace_back(s, y);
                    }
                }
            }
        }
        if (pairs.empty()) return std::nullopt;
        const auto [s, t] = pairs[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pairs.size()) - 1))];
        Query q;
        q.u = s;
        q.v = t;
        return Draft{std::move(g), std::move(q)};
    }
    case Task::hamilton: {
        Graph g = generate_er(n, p, false, rng.next());
        const auto ans = hamilton_path(g, spec.hamilton);
        if (ans.kind == AnswerKind::unknown) return std::nullopt;
        if (target == LabelTarget::yes && !ans.yes) {
            const auto perm = permutation(rng, n);
            for (int i = 0; i + 1 < n; ++i) {
                if (!g.has_edge(perm[i], perm[i + 1])) g.add_edge(perm[i], perm[i + 1]);
            }
        }
        if (target == LabelTarget::no && ans.yes) {
            if (n < 4) {
                g.retain_edges([](const Edge&) { return false; });
            } else {
                // three degree-one nodes rule out any Hamilton path
                const auto perm = permutation(rng, n);
                std::vector<bool> leaf(n, false);
                for (int i = 0; i < 3; ++i) leaf[perm[i]] = true;
                g.retain_edges([&](const Edge& e) { return !leaf[e.u] && !leaf[e.v]; });
                for (int i = 0; i < 3; ++i) {
                    const NodeId hub = perm[static_cast<std::size_t>(rng.uniform_int(3, n - 1))];
                    g.add_edge(perm[i], hub);
                }
            }
        }
        return Draft{std::move(g), {}};
    }
    case Task::subgraph: {
        const int kmin = std::max(2, spec.pattern_nodes.min);
        const int kmax = std::min(spec.pattern_nodes.max, n);
        if (kmax < kmin) return std::nullopt;
        const int k = static_cast<int>(rng.uniform_int(kmin, kmax));
        Graph g = ascending_dag(n, p, rng.next());
        Graph pat = random_pattern(rng, k);
        const bool present = subgraph_match(g, pat).yes;
        if (target == LabelTarget::yes && !present) {
            auto chosen = permutation(rng, n);
            chosen.resize(k);
            std::sort(chosen.begin(), chosen.end());
            for (const auto& e : pat.edges()) {
                if (!g.has_edge(chosen[e.u], chosen[e.v])) g.add_edge(chosen[e.u], chosen[e.v]);
            }
        }
        if (target == LabelTarget::no) {
            for (int round = 0; round < 64 && subgraph_match(g, pat).yes; ++round) {
                g.retain_edges([&](const Edge&) { return rng.bernoulli(0.5); });
            }
        }
        Query q;
        q.pattern = std::move(pat);
        return Draft{std::move(g), std::move(q)};
    }
    }
    return std::nullopt;
}

} // namespace

std::vector<TierSpec> default_tiers(Task task, std::size_t token_budget) {
    const auto range = task_node_range(task);
    const int span = range.max - range.min + 1;
    std::vector<TierSpec> tiers;
    for (std::size_t i = 0; i < kTierCount; ++i) {
        TierSpec t;
        t.min_nodes = range.min + static_cast<int>(i) * span / static_cast<int>(kTierCount);
        t.max_nodes = range.min + static_cast<int>(i + 1) * span / static_cast<int>(kTierCount) - 1;
        const double room = 0.75 * static_cast<double>(token_budget) * 4.0 - 300.0;
        const double cap = room / (bytes_per_edge(task) * candidate_pairs(task, t.max_nodes));
        t.p = std::min(kDensityCycle[i], std::floor(cap * 100.0) / 100.0);
        tiers.push_back(t);
    }
    return tiers;
}

GenSpec default_gen_spec(Task task, std::size_t count, std::uint64_t seed) {
    GenSpec spec;
    spec.task = task;
    spec.node_range = task_node_range(task);
    spec.tiers = default_tiers(task, spec.token_budget);
    spec.seed = seed;
    spec.count = count;
    return spec;
}

void validate(const GenSpec& spec) {
    const auto bounds = task_node_range(spec.task);
    auto fail = [&](const std::string& msg) {
        throw Error(ErrorKind::invalid_spec, std::string(task_name(spec.task)) + ": " + msg);
    };
    if (spec.node_range.min < bounds.min || spec.node_range.max > bounds.max || spec.node_range.min > spec.node_range.max) {
        fail("node range [" + std::to_string(spec.node_range.min) + ", " + std::to_string(spec.node_range.max) +
             "] outside [" + std::to_string(bounds.min) + ", " + std::to_string(bounds.max) + "]");
    }
    if (spec.tiers.size() != kTierCount) {
        fail("exactly five tiers are required");
    }
    for (const auto& t : spec.tiers) {
        if (t.min_nodes > t.max_nodes || t.min_nodes < spec.node_range.min || t.max_nodes > spec.node_range.max) {
            fail("tier node band outside the task node range");
        }
        if (!(t.p > 0.0 && t.p <= 1.0)) {
            fail("tier edge probability must lie in (0, 1]");
        }
    }
    if (spec.weight_range.min < 1 || spec.weight_range.max < spec.weight_range.min) {
        fail("weight range must be non-empty with min >= 1");
    }
    if (spec.task == Task::subgraph &&
        (spec.pattern_nodes.min < 2 || spec.pattern_nodes.max < spec.pattern_nodes.min || spec.pattern_nodes.max > 26)) {
        fail("pattern node range must lie within [2, 26]");
    }
    if (spec.max_attempts == 0) {
        fail("max_attempts must be positive");
    }
}

LabelTarget label_target(Task task, std::size_t index) {
    if (!is_binary(task)) return LabelTarget::any;
    return index % 2 == 0 ? LabelTarget::yes : LabelTarget::no;
}

std::uint64_t problem_seed(const GenSpec& spec, std::size_t index, std::size_t attempt) {
    return derive_seed(spec.seed, {task_index(spec.task), index, attempt});
}

std::optional<Problem> generate_problem(const GenSpec& spec, std::size_t index, std::uint64_t seed, LabelTarget target) {
    const auto& tier = spec.tiers.at(index % kTierCount);
    Rng rng(seed);
    const int n = static_cast<int>(rng.uniform_int(tier.min_nodes, tier.max_nodes));
    if (n < 2) return std::nullopt;
    auto draft = draft_problem(spec, rng, n, tier.p, target);
    if (!draft) return std::nullopt;

    Problem p;
    p.task = spec.task;
    p.graph = std::move(draft->graph);
    p.query = std::move(draft->query);
    p.answer = solve(p.task, p.graph, p.query, spec.hamilton);
    if (p.answer.kind == AnswerKind::unknown || p.answer.kind == AnswerKind::none_exists) return std::nullopt;
    if (!meets(target, p.answer)) return std::nullopt;
    if (estimate_tokens(render_problem(p)) > spec.token_budget) return std::nullopt;

    char id[32];
    std::snprintf(id, sizeof id, "-%05zu", index);
    p.id = std::string(task_name(spec.task)) + "-" + spec.split + id;
    p.tier = {n, tier.p, task_difficulty(spec.task), static_cast<int>(index % kTierCount)};
    p.seed = seed;
    return p;
}

std::string problem_key(const Problem& p) {
    std::string key = canonical_key(p.graph);
    if (p.query.pattern) {
        key += ":" + canonical_key(*p.query.pattern);
    }
    return key;
}

GenerationResult generate_problems(const GenSpec& spec, std::unordered_set<std::string>& seen, int jobs) {
    validate(spec);
    struct Slot {
        std::optional<Problem> problem;
        std::size_t attempt = 0;
        std::size_t rejected = 0;
    };
    std::vector<Slot> slots(spec.count);

    auto fill = [&](std::size_t index, Slot& slot) {
        const auto target = label_target(spec.task, index);
        while (slot.attempt < spec.max_attempts) {
            auto p = generate_problem(spec, index, problem_seed(spec, index, slot.attempt), target);
            ++slot.attempt;
            if (p) {
                slot.problem = std::move(p);
                return;
            }
            ++slot.rejected;
        }
        throw Error(ErrorKind::stage, std::string(task_name(spec.task)) + " problem " + std::to_string(index) +
                                          " could not be generated within " + std::to_string(spec.max_attempts) +
                                          " attempts");
    };

    parallel_for(spec.count, jobs, [&](std::size_t i) { fill(i, slots[i]); });

    GenerationResult result;
    result.problems.reserve(spec.count);
    for (std::size_t i = 0; i < spec.count; ++i) {
        auto& slot = slots[i];
        while (!seen.insert(problem_key(*slot.problem)).second) {
            ++result.stats.duplicates;
            slot.problem.reset();
            fill(i, slot);
        }
        result.stats.attempts += slot.attempt;
        result.stats.rejected += slot.rejected;
        result.problems.push_back(std::move(*slot.problem));
    }
    return result;
}

GenerationResult generate_problems(const GenSpec& spec, int jobs) {
    std::unordered_set<std::string> seen;
    return generate_problems(spec, seen, jobs);
}

} // namespace graphreason
