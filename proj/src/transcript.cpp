#include "graphreason/transcript.hpp"

#include "graphreason/error.hpp"

#include <algorithm>
#include <array>
#include <queue>

namespace graphreason {

namespace {

std::string plural(std::int64_t n, const std::string& noun) {
    return std::to_string(n) + " " + noun + (n == 1 ? "" : "s");
}

constexpr std::array<std::string_view, 4> kOpeners = {
    "Let's think step by step.",
    "We work through the graph one step at a time.",
    "To answer this, we examine the structure of the graph.",
    "Let's look at the edges carefully.",
};

constexpr std::array<std::string_view, 4> kClosers = {
    "So the answer is",
    "Therefore, the answer is",
    "Hence the answer is",
    "Thus, the answer is",
};

constexpr std::array<std::string_view, 3> kBridges = {
    "",
    " Checking this once more confirms it.",
    " Nothing in the remaining edges changes this.",
};

std::string join_nodes(const std::vector<NodeId>& nodes, std::string_view sep) {
    std::string s;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i) s += sep;
        s += std::to_string(nodes[i]);
    }
    return s;
}

std::string bracket(const std::vector<NodeId>& nodes, std::string_view sep = ",") {
    return "[" + join_nodes(nodes, sep) + "]";
}

std::string arrow_chain(const std::vector<NodeId>& nodes) { return bracket(nodes, "->"); }

std::string node_list(const std::vector<NodeId>& nodes) {
    std::string s;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i) s += (i + 1 == nodes.size()) ? (nodes.size() > 2 ? ", and " : " and ") : ", ";
        s += "node " + std::to_string(nodes[i]);
    }
    return s;
}

std::string edge_tuple(const Graph& g, NodeId a, NodeId b) {
    std::string s = "(" + std::to_string(a) + (g.directed() ? "->" : ",") + std::to_string(b);
    if (auto w = g.edge_weight(a, b)) s += "," + std::to_string(*w);
    return s + ")";
}

std::vector<NodeId> component_of(const Graph& g, NodeId start) {
    const auto adj = g.undirected_adjacency();
    std::vector<bool> seen(g.num_nodes(), false);
    std::vector<NodeId> stack{start}, out;
    seen[start] = true;
    while (!stack.empty()) {
        const NodeId x = stack.back();
        stack.pop_back();
        out.push_back(x);
        for (NodeId y : adj[x]) {
            if (!seen[y]) {
                seen[y] = true;
                stack.push_back(y);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int component_count(const Graph& g) {
    std::vector<bool> seen(g.num_nodes(), false);
    int count = 0;
    for (NodeId x = 0; x < g.num_nodes(); ++x) {
        if (seen[x]) continue;
        ++count;
        for (NodeId y : component_of(g, x)) seen[y] = true;
    }
    return count;
}

std::string describe_block(const std::vector<NodeId>& block) {
    if (block.size() <= 12) return node_list(block);
    return std::to_string(block.size()) + " nodes including node " + std::to_string(block.front());
}

std::vector<NodeId> bfs_path(const Graph& g, NodeId s, NodeId t) {
    const auto adj = g.adjacency();
    std::vector<NodeId> parent(g.num_nodes(), -2);
    std::queue<NodeId> q;
    q.push(s);
    parent[s] = -1;
    while (!q.empty()) {
        const NodeId x = q.front();
        q.pop();
        if (x == t) break;
        for (NodeId y : adj[x]) {
            if (parent[y] == -2) {
                parent[y] = x;
                q.push(y);
            }
        }
    }
    if (parent[t] == -2) return {};
    std::vector<NodeId> path;
    for (NodeId x = t; x != -1; x = parent[x]) path.push_back(x);
    std::reverse(path.begin(), path.end());
    return path;
}

// Reasoning for a correct conclusion. Every cited edge exists in g.
std::string correct_body(Task task, const Graph& g, const Query& q, const Answer& a, bool detail) {
    std::string s;
    switch (task) {
    case Task::cycle: {
        if (a.yes) {
            const auto& c = a.witness.nodes;
            s = "Starting from node " + std::to_string(c.front());
            for (std::size_t i = 1; i < c.size(); ++i) {
                s += (i + 1 == c.size() ? ", and back to node " : ", we can go to node ") + std::to_string(c[i]) +
                     " via edge " + edge_tuple(g, std::min(c[i - 1], c[i]), std::max(c[i - 1], c[i]));
            }
            s += ". This forms a cycle " + arrow_chain(c) + " without revisiting any edge.";
        } else {
            s = "The graph has " + std::to_string(g.num_nodes()) + " nodes, " + std::to_string(g.edge_count()) +
                " edges and " + plural(component_count(g), "connected block") +
                ". The number of edges equals the number of nodes minus the number of blocks, "
                "so every block is a tree and no cycle can be formed.";
        }
        break;
    }
    case Task::connect: {
        const NodeId u = *q.u, v = *q.v;
        if (a.yes) {
            const auto& p = a.witness.nodes;
            if (p.size() < 2) {
                s = "Node " + std::to_string(u) + " and node " + std::to_string(v) + " are the same node.";
                break;
            }
            for (std::size_t i = 0; i + 1 < p.size(); ++i) {
                s += (i ? ", node " : "Node ") + std::to_string(p[i]) + " is connected to node " + std::to_string(p[i + 1]);
            }
            s += ". We can follow the path: " + arrow_chain(p) + ".";
        } else {
            s = "Node " + std::to_string(u) + " is in the connected block consisting of " +
                describe_block(component_of(g, u)) + ". Node " + std::to_string(v) +
                " is in the connected block consisting of " + describe_block(component_of(g, v)) + ". Node " +
                std::to_string(u) + " and node " + std::to_string(v) + " are not in the same connected block.";
        }
        break;
    }
    case Task::bipartite: {
        if (a.yes) {
            std::vector<NodeId> left, right;
            for (NodeId x = 0; x < g.num_nodes(); ++x) {
                (a.witness.nodes.size() == static_cast<std::size_t>(g.num_nodes()) && a.witness.nodes[x] ? right : left)
                    .push_back(x);
            }
            s = "We try to split the nodes into two sets so that every edge joins the two sets.";
            if (detail && !left.empty()) s += " Put node " + std::to_string(left.front()) + " in set A and give its neighbours the other color.";
            s += " Set A = {" + join_nodes(left, ", ") + "} and set B = {" + join_nodes(right, ", ") +
                 "}, and no edge stays inside one set, so the graph is bipartite.";
        } else {
            const auto& c = a.witness.nodes;
            for (std::size_t i = 0; i < c.size(); ++i) {
                s += (i ? ", node " : "Node ") + std::to_string(c[i]) + " is connected to node " +
                     std::to_string(c[(i + 1) % c.size()]);
            }
            s += ". These " + std::to_string(c.size()) +
                 " nodes form a cycle of odd length, so two colors cannot alternate around it and the graph is not bipartite.";
        }
        break;
    }
    case Task::topology: {
        if (a.kind == AnswerKind::none_exists) {
            s = "Every remaining node keeps an incoming edge at some point, so the graph contains a directed cycle.";
            break;
        }
        const auto& order = a.sequence;
        s = "We repeatedly take a node that has no remaining incoming edges and remove its outgoing edges.";
        if (detail && !order.empty()) {
            s += " Node " + std::to_string(order.front()) + " has no incoming edges, so it comes first.";
        }
        s += " Continuing this way, one topology sorting path of this graph is " + bracket(order, ", ") + ".";
        break;
    }
    case Task::shortest: {
        const NodeId u = *q.u, v = *q.v;
        if (a.kind == AnswerKind::none_exists) {
            s = "Node " + std::to_string(u) + " and node " + std::to_string(v) + " are not connected.";
            break;
        }
        const auto& p = a.witness.nodes;
        std::string sum;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            if (i) sum += " + ";
            sum += std::to_string(*g.edge_weight(p[i], p[i + 1]));
        }
        if (detail && p.size() > 1) {
            s = "The path uses the edges";
            for (std::size_t i = 0; i + 1 < p.size(); ++i) {
                s += " " + edge_tuple(g, std::min(p[i], p[i + 1]), std::max(p[i], p[i + 1]));
            }
            s += ". ";
        }
        s += "The shortest path from node " + std::to_string(u) + " to node " + std::to_string(v) + " is " +
             arrow_chain(p) + " with a total weight of <<" + (sum.empty() ? "0" : sum) + " = " +
             std::to_string(a.number) + ">>.";
        break;
    }
    case Task::triangle: {
        if (a.kind == AnswerKind::none_exists) {
            s = "No three nodes are all connected to each other.";
            break;
        }
        const auto& t = a.witness.nodes;
        const auto& w = *g.node_weights();
        s = "Nodes " + std::to_string(t[0]) + ", " + std::to_string(t[1]) + ", and " + std::to_string(t[2]) +
            " form a fully interconnected set through the edges " + edge_tuple(g, t[0], t[1]) + ", " +
            edge_tuple(g, t[0], t[2]) + ", and " + edge_tuple(g, t[1], t[2]) + ". The sum of their weights is <<" +
            std::to_string(w[t[0]]) + " (Node " + std::to_string(t[0]) + ") + " + std::to_string(w[t[1]]) +
            " (Node " + std::to_string(t[1]) + ") + " + std::to_string(w[t[2]]) + " (Node " + std::to_string(t[2]) +
            ") = " + std::to_string(a.number) + ">>. No other group of three interconnected nodes has a larger sum.";
        break;
    }
    case Task::flow: {
        const NodeId src = *q.u, dst = *q.v;
        if (detail) {
            const auto p = bfs_path(g, src, dst);
            if (p.size() > 1) {
                s = "One route from node " + std::to_string(src) + " to node " + std::to_string(dst) + " uses the edges";
                for (std::size_t i = 0; i + 1 < p.size(); ++i) s += " " + edge_tuple(g, p[i], p[i + 1]);
                s += ". ";
            }
        }
        s += "We push flow along augmenting paths until no path with spare capacity remains. The maximum flow from node " +
             std::to_string(src) + " to node " + std::to_string(dst) + " is " + plural(a.number, "unit") + ".";
        break;
    }
    case Task::hamilton: {
        if (a.yes) {
            const auto& p = a.witness.nodes;
            if (!p.empty()) s = "We can start at node " + std::to_string(p.front()) + ".";
            if (detail && p.size() <= 16) {
                for (std::size_t i = 0; i + 1 < p.size(); ++i) {
                    s += " As node " + std::to_string(p[i]) + " is connected with node " + std::to_string(p[i + 1]) +
                         ", and node " + std::to_string(p[i + 1]) + " is not visited, we can then visit node " +
                         std::to_string(p[i + 1]) + ".";
                }
            }
            s += " So, one possible Hamiltonian path is: " + bracket(p) + ".";
            break;
        }
        std::vector<NodeId> leaves;
        const auto adj = g.undirected_adjacency();
        for (NodeId x = 0; x < g.num_nodes(); ++x) {
            if (adj[x].size() <= 1) leaves.push_back(x);
        }
        if (component_count(g) > 1) {
            s = "The graph is split into " + std::to_string(component_count(g)) +
                " connected blocks, so no single path can visit every node.";
        } else if (leaves.size() > 2) {
            s = "Nodes " + join_nodes(leaves, ", ") +
                " each have only one neighbour, and a path can end at no more than two such nodes.";
        } else {
            s = "Every choice of starting node runs into a dead end before all nodes are visited.";
        }
        break;
    }
    case Task::subgraph: {
        const auto& pat = *q.pattern;
        if (a.yes) {
            const auto& m = a.witness.nodes;
            s = "Mapping";
            for (std::size_t i = 0; i < m.size(); ++i) {
                s += (i ? ", " : " ") + std::string(1, static_cast<char>('a' + i)) + " to node " + std::to_string(m[i]);
            }
            s += ", every edge of G' lands on an edge of G:";
            for (const auto& e : pat.edges()) {
                s += " " + edge_tuple(g, m[e.u], m[e.v]);
            }
            s += ". So subgraph G' is present within graph G as a direct substructure.";
        } else {
            s = "Subgraph G' has " + std::to_string(pat.num_nodes()) + " nodes and " + std::to_string(pat.edge_count()) +
                " edges. No assignment of its nodes to distinct nodes of G maps every edge of G' onto an edge of G.";
        }
        break;
    }
    }
    return s;
}

// Reasoning for a wrong conclusion; avoids citing concrete edges.
std::string wrong_body(Task task, const Query& q, const Answer& claimed) {
    switch (task) {
    case Task::cycle:
        return claimed.yes ? "Following the edges we eventually return to a node we already visited."
                           : "Every connected block looks like a tree, so there is no way to come back to a node.";
    case Task::connect:
        return claimed.yes ? "Node " + std::to_string(*q.u) + " can reach node " + std::to_string(*q.v) + " through the graph."
                           : "Node " + std::to_string(*q.u) + " and node " + std::to_string(*q.v) +
                                 " seem to lie in different connected blocks.";
    case Task::bipartite:
        return claimed.yes ? "Coloring the nodes alternately never puts two neighbours in the same set."
                           : "Coloring the nodes alternately eventually puts two neighbours in the same set.";
    case Task::topology:
        return "Taking nodes in the order they appear, one topology sorting path is " + bracket(claimed.sequence, ", ") + ".";
    case Task::shortest:
        return "Comparing the candidate routes, the lightest one has a total weight of " + describe(claimed) + ".";
    case Task::triangle:
        return "The heaviest group of three interconnected nodes has a weight sum of " + describe(claimed) + ".";
    case Task::flow:
        return "Adding up the capacities of the routes into the sink gives a maximum flow of " + describe(claimed) + " units.";
    case Task::hamilton:
        return claimed.yes ? "Walking greedily through unvisited neighbours seems to reach every node."
                           : "Some node always seems to be left over, so no path visits every node.";
    case Task::subgraph:
        return claimed.yes ? "The nodes of G with high out-degree seem to reproduce the edges of G'."
                           : "No node of G seems to have the out-degree needed to play the role of the hub of G'.";
    }
    return {};
}

} // namespace

std::string conclusion(Task task, const Answer& a) {
    switch (a.kind) {
    case AnswerKind::yes_no:
        if (a.yes && task == Task::hamilton && !a.witness.nodes.empty()) {
            return "### Yes, " + bracket(a.witness.nodes) + ".";
        }
        return a.yes ? "### Yes." : "### No.";
    case AnswerKind::numeric: return "### " + std::to_string(a.number) + ".";
    case AnswerKind::node_sequence: return "### " + bracket(a.sequence, ", ");
    case AnswerKind::none_exists: return "### None.";
    case AnswerKind::unknown: break;
    }
    throw Error(ErrorKind::invalid_input, "no conclusion exists for an unknown answer");
}

Answer wrong_answer(Task task, const Graph& g, const Answer& truth, Rng& rng) {
    switch (truth.kind) {
    case AnswerKind::yes_no: return Answer::boolean(!truth.yes);
    case AnswerKind::numeric: {
        const auto delta = rng.uniform_int(1, 3);
        if (truth.number - delta >= 0 && rng.bernoulli(0.5)) return Answer::numeric(truth.number - delta);
        return Answer::numeric(truth.number + delta);
    }
    case AnswerKind::node_sequence: {
        auto seq = truth.sequence;
        if (g.edge_count() > 0) {
            std::reverse(seq.begin(), seq.end());
        } else if (!seq.empty()) {
            seq.pop_back();
        }
        return Answer::nodes(std::move(seq));
    }
    case AnswerKind::none_exists:
        if (task == Task::topology) {
            std::vector<NodeId> seq(g.num_nodes());
            for (NodeId x = 0; x < g.num_nodes(); ++x) seq[x] = x;
            return Answer::nodes(std::move(seq));
        }
        return Answer::numeric(rng.uniform_int(1, 30));
    case AnswerKind::unknown: break;
    }
    throw Error(ErrorKind::invalid_input, "cannot derive a wrong answer from an unknown answer");
}

std::string synthesize_transcript(Task task, const Graph& g, const Query& q, const Answer& truth, bool correct,
                                  std::uint64_t seed, std::size_t variant) {
    Rng rng(derive_seed(seed, {variant}));
    const bool detail = rng.bernoulli(0.5);
    const Answer claimed = correct ? truth : wrong_answer(task, g, truth, rng);

    std::string s(kOpeners[variant % kOpeners.size()]);
    s += " ";
    s += correct ? correct_body(task, g, q, truth, detail) : wrong_body(task, q, claimed);
    s += kBridges[(variant / (kOpeners.size() * kClosers.size())) % kBridges.size()];
    s += " ";
    s += kClosers[(variant / kOpeners.size()) % kClosers.size()];
    s += " ";
    s += claimed.kind == AnswerKind::yes_no ? (claimed.yes ? "yes" : "no") : describe(claimed);
    s += ". " + conclusion(task, claimed);
    return s;
}

} // namespace graphreason
