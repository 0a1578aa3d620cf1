#include "graphreason/error.hpp"
#include "graphreason/generate.hpp"
#include "graphreason/textgen.hpp"
#include "graphreason/transcript.hpp"

#include <array>
#include <mutex>

namespace graphreason {

namespace {

Graph undirected(int n, std::initializer_list<std::pair<int, int>> edges) {
    Graph g(n, false);
    for (auto [u, v] : edges) g.add_edge(u, v);
    return g;
}

Graph directed(int n, std::initializer_list<std::pair<int, int>> edges) {
    Graph g(n, true);
    for (auto [u, v] : edges) g.add_edge(u, v);
    return g;
}

PromptTemplate connect_template() {
    PromptTemplate t;
    t.task = Task::connect;
    t.header =
        "Determine if there is a path between two nodes in the graph.\n"
        "Note that (i,j) means that node i and node j are connected with an undirected edge.\n"
        "Given a graph and a pair of nodes, you need to output Yes or No step by step, indicating whether the node i "
        "and node j are connected.";
    t.exemplars = {
        {"The nodes are numbered from 0 to 5, and the edges are: (0,1) (1,2) (3,4) (4,5). Is there a path between "
         "node 1 and node 4?",
         "Node 1 is in the connected block consisted of node 0, node 1, and node 2.\n"
         "Node 4 is in the connected block consisting of node 3, node 4, and node 5. Node 1 and node 4 are not in the "
         "same connected block, so the answer is no. ### No."},
        {"The nodes are numbered from 0 to 5, and the edges are: (0,1) (0,2) (1,5) (1,2) (1,3) (2,5). Is there a "
         "path between node 2 and node 3?",
         "Node 2 is connected to node 1, node 1 is connected to node 3. We can follow the path: [2->1->3], so the "
         "answer is yes. ### Yes."},
    };
    return t;
}

PromptTemplate cycle_template() {
    PromptTemplate t;
    t.task = Task::cycle;
    t.header =
        "Determine whether or not there is a cycle in an undirected graph. Begin with '###' to give your final "
        "conclusion.\n"
        "In an undirected graph, (i,j) means that node i and node j are connected with an undirected edge.\n"
        "Given a graph, you need to output Yes or No step by step, indicating whether there is a cycle in the graph.";
    t.intro = "Below are examples:";
    t.exemplars = {
        {render_question(Task::cycle, undirected(6, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4}, {4, 5}}), {}),
         "Starting from node 0, we can go to node 1 (via edge (0,1)), then to node 3 (via edge (1,3)), then to node 2 "
         "(via edge (2,3)), and back to node 0 (via edge (0,2)). This forms a cycle [0->1->3->2->0] without revisiting "
         "any edge. So, there is a cycle in this graph. ### Yes."},
        {render_question(Task::cycle, undirected(5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}}), {}),
         "The graph has 5 nodes and 4 edges, and all nodes lie in one connected block, so it is a tree. Leaving any "
         "node along an edge never leads back to it without reusing that edge, so there is no cycle in this graph. "
         "### No."},
    };
    return t;
}

PromptTemplate bipartite_template() {
    PromptTemplate t;
    t.task = Task::bipartite;
    t.header =
        "Determine whether or not a graph is bipartite.\n"
        "In a directed graph, (i->j) means that node i and node j are connected with an directed edge from node i to "
        "node j.\n"
        "Given a graph, you need to output 'Yes' or 'No' step by step, indicating whether the graph is bipartite.";
    t.intro = "Blow are examples:";
    t.exemplars = {
        {render_question(Task::bipartite, directed(6, {{0, 3}, {0, 4}, {1, 3}, {1, 5}, {2, 4}, {2, 5}}), {}),
         "We try to split the nodes into two sets so that every edge goes between the sets. Put node 0 in set A; its "
         "neighbours 3 and 4 go to set B. Node 3 is also connected to node 1, so node 1 goes to set A, and node 1's "
         "neighbour 5 goes to set B. Node 2 is connected to nodes 4 and 5, both in set B, so node 2 goes to set A. "
         "Set A = {0, 1, 2} and set B = {3, 4, 5}, and every edge joins the two sets, so the graph is bipartite. "
         "### Yes."},
        {render_question(Task::bipartite, directed(4, {{0, 1}, {1, 2}, {2, 0}, {2, 3}}), {}),
         "Put node 0 in set A. Node 1 is connected to node 0 by the edge (0->1), so it goes to set B. Node 2 is "
         "connected to node 1 by the edge (1->2), so it goes to set A. But the edge (2->0) joins node 2 and node 0, "
         "which are both in set A. Nodes 0, 1 and 2 form an odd cycle, so no valid split exists and the graph is not "
         "bipartite. ### No."},
    };
    return t;
}

PromptTemplate topology_template() {
    PromptTemplate t;
    t.task = Task::topology;
    t.header =
        "Find one of the topology sorting paths of the given graph.\n"
        "In a directed graph, (i->j) means that node i and node j are connected with a directed edge from node i to "
        "node j.\n"
        "Given a graph, you need to output one of the topology sorting paths of the graph.";
    t.exemplars = {
        {render_question(Task::topology, directed(5, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4}}), {}),
         "Node 0 has no incoming edges, so we start with node 0. After removing node 0 and its outgoing edges, nodes "
         "1 and 2 have no incoming edges; we take node 1 and then node 2. Node 3 now has no incoming edges, and "
         "finally node 4. So one topology sorting path of this graph is [0, 1, 2, 3, 4]. ### [0, 1, 2, 3, 4]"},
        {render_question(Task::topology, directed(6, {{2, 0}, {2, 5}, {5, 1}, {0, 1}, {4, 3}, {1, 3}}), {}),
         "Nodes 2 and 4 have no incoming edges. We start with node 2. After removing the edges (2->0) and (2->5), "
         "node 0 has no incoming edges, so it comes next, followed by node 4. Node 5 is now free of incoming edges, "
         "then node 1, whose incoming edges (5->1) and (0->1) are gone, and finally node 3. So one topology sorting "
         "path of this graph is [2, 0, 4, 5, 1, 3]. ### [2, 0, 4, 5, 1, 3]"},
    };
    return t;
}

PromptTemplate shortest_template() {
    PromptTemplate t;
    t.task = Task::shortest;
    t.header =
        "Find the shortest path between two nodes in an undirected graph.\n"
        "In an undirected graph, (i,j,k) means that node i and node j are connected with an undirected edge with "
        "weight k.\n"
        "Given a graph and a pair of nodes, you need to output the shortest path between the two nodes.";
    t.exemplars = {
        {"In an undirected graph, the nodes are numbered from 0 to 6, and the edges are: (0,1,1) (1,2,2) (0,2,4) "
         "(0,4,2) (2,6,2) (4,6,4) (4,3,5) (6,5,3) (3,5,4). Give the weight of the shortest path from node 0 to node 5.",
         "All the paths from node 0 to node 5 are:\n"
         "0,2,6,5 with a total weight of <<4 + 2 + 3 = 9>>,\n"
         "0,1,2,6,5 with a total weight of <<1 + 2 + 2 + 3 = 8>>,\n"
         "0,4,6,5 with a total weight of <<2 + 4 + 3 = 9>>,\n"
         "0,4,3,5 with a total weight of <<2 + 5 + 4 = 11>>.\n"
         "The weight of path 0,1,2,6,5 is the smallest, so the shortest path from node 0 to node 5 is [0,1,2,6,5] "
         "with a total weight of 8. ### 8."},
        {"In an undirected graph, the nodes are numbered from 0 to 4, and the edges are: (0,3,2) (0,4,1) (0,2,1) "
         "(4,1,2) (2,1,1) (3,2,4) (2,4,1) (3,4,2). Give the weight of the shortest path from node 3 to node 1.",
         "All the paths from node 3 to node 1 are:\n"
         "3,2,1 with a total weight of <<4 + 1 = 5>>,\n"
         "3,2,4,1 with a total weight of <<4 + 1 + 2 = 7>>,\n"
         "3,4,1 with a total weight of <<2 + 2 = 4>>,\n"
         "3,4,2,1 with a total weight of <<2 + 1 + 1 = 4>>,\n"
         "3,0,4,1 with a total weight of <<2 + 1 + 2 = 5>>,\n"
         "3,0,2,1 with a total weight of <<2 + 1 + 1 = 4>>,\n"
         "3,4,2,4,1 with a total weight of <<2 + 1 + 1 + 2 = 6>>.\n"
         "The weight of path 3,4,1 is the smallest, so the shortest path from node 3 to node 1 is [3,4,1] with a "
         "total weight of 4. ### 4."},
    };
    return t;
}

PromptTemplate flow_template() {
    PromptTemplate t;
    t.task = Task::flow;
    t.header =
        "Find the maximum flow between two nodes in a directed graph.\n"
        "In a directed graph, (i->j,k) means that node i and node j are connected with an directed edge from node i "
        "to node j with weight k.\n"
        "Given a graph and a pair of nodes, you need to output the maximum flow between the two nodes.";
    t.intro = "Below are examples:";
    t.exemplars = {
        {"The nodes are numbered from 0 to 8, and the edges are: (0->2,3) (0->1,9) (0->5,4) (0->3,1) (1->2,7) "
         "(1->3,4) (1->5,7) (1->4,5) (2->3,2) (2->5,3) (2->8,2) (2->7,6) (3->5,8) (3->8,4) (3->4,9) (4->7,4) "
         "(4->5,6) (4->6,1) (5->6,2) (6->7,6). What is the maximum flow from node 0 to node 2?",
         "Initially, we can direct a flow of 3 units straight from node 0 to node 2 through the edge (0->2).\n"
         "Further examination reveals that an additional flow can be routed through node 1: the edge (0->1) can carry "
         "up to 9 units, and from node 1 to node 2, we can direct 7 units, as limited by the edge (1->2).\n"
         "Summing these flows, we find that a direct flow of 3 units and an indirect flow of 7 units via node 1 give "
         "us a total maximum flow of 10 units from node 0 to node 2.\n"
         "This calculation takes into account the various paths and their capacities, ensuring that the flow through "
         "any edge does not exceed its capacity.\n"
         "Hence, in this graph, the maximum flow from node 0 to node 2 is 10 units. ### 10."},
        {"The nodes are numbered from 0 to 7, and the edges are: (0->3,1) (0->6,5) (0->1,8) (0->5,4) (1->7,1) "
         "(1->6,2) (1->2,7) (2->4,5) (2->5,3) (2->3,7) (2->7,4) (3->6,7) (3->5,3) (3->7,7) (4->7,7) (5->7,7) "
         "(5->6,1) (6->7,2). What is the maximum flow from node 2 to node 6?",
         "The graph contains edges like (2->3,7) and (3->6,7), which are crucial for determining the flow.\n"
         "Firstly, there is no direct path from node 2 to node 6, so we explore indirect routes.\n"
         "One such path is through node 3, where node 2 can send a maximum of 7 units to node 3, which in turn can "
         "forward up to 7 units to node 6. Another route is via node 5; node 2 can send 3 units to node 5, but due to "
         "the limited capacity of 1 unit on the edge from node 5 to node 6, only 1 unit can reach node 6 through this "
         "path.\n"
         "There's also a path from node 2 to node 7 with a capacity of 4 units, but it doesn't lead to node 6.\n"
         "Thus, by summing the feasible flows, we find that the maximum flow from node 2 to node 6 is 8 units. ### 8."},
    };
    return t;
}

PromptTemplate triangle_template() {
    PromptTemplate t;
    t.task = Task::triangle;
    t.header =
        "Find the maximum sum of the weights of three interconnected nodes.\n"
        "In an undirected graph, [i, k] means that node i has the weight k. (i,j) means that node i and node j are "
        "connected with an undirected edge.\n"
        "Given a graph, you need to output the maximum sum of the weights of three interconnected nodes.\n";
    t.exemplars = {
        {"The nodes are numbered from 0 to 4, weights of nodes are: [0, 2] [1, 9] [2, 6] [3, 10] [4, 4], and the "
         "edges are: (0, 1) (0, 3) (1, 3) (2, 4) (3, 4). What is the maximum sum of the weights of three "
         "interconnected nodes?",
         "The nodes and their weights are as follows: Node 0 with weight 2, Node 1 with weight 9, Node 2 with weight "
         "6, Node 3 with weight 10, and Node 4 with weight 4.\n"
         "Upon examining the connections between these nodes, it becomes evident that only Nodes 0, 1, and 3 form a "
         "fully interconnected set, with each node directly connected to the other two. The sum of their weights is "
         "<<2 (Node 0) + 9 (Node 1) + 10 (Node 3) = 21>>.\n"
         "Therefore, the maximum sum of the weights of three interconnected nodes in this graph is 21. ### 21."},
        {"The nodes are numbered from 0 to 4, weights of nodes are: [0, 9] [1, 3] [2, 5] [3, 9] [4, 4], and the "
         "edges are: (0, 4) (0, 1) (1, 4) (2, 3). What is the maximum sum of the weights of three interconnected "
         "nodes?",
         "The graph comprises nodes 0 to 4, each with respective weights of 9, 3, 5, 9, and 4.\n"
         "Analyzing the graph's edges reveals that Nodes 0, 1, and 4 are the only trio of connected nodes, linked "
         "through the edges (0, 4), (0, 1), and (1, 4).\n"
         "By adding their weights:  <<9 (Node 0) + 3 (Node 1) +  4 (Node 4) = 16>>. There are no other groups of "
         "three interconnected nodes in this graph.\n"
         "Therefore, the maximum sum of the weights of three connected nodes in this graph is determined to be 16. "
         "### 16."},
    };
    return t;
}

PromptTemplate subgraph_template() {
    PromptTemplate t;
    t.task = Task::subgraph;
    t.header =
        "Determine if a smaller graph is present as an exact match within a larger graph.\n"
        "In a directed graph, (i->j) means that node i and node j are connected with a directed edge from node i to "
        "node j.\n"
        "Given a graph G and a subgraph G', you need to output Yes or No, indicating whether subgraph G' is present "
        "within the directed graph G.";
    t.intro = "Below are examples:";
    t.exemplars = {
        {"The nodes of graph G are numbered from 0 to 7, and the edges are: (0->4) (0->5) (0->2) (0->3) (0->1) "
         "(0->7) (1->6) (1->5) (1->4) (1->7) (1->3) (2->7) (2->5) (2->6) (2->3) (3->4) (3->6) (3->7) (3->5) (4->7) "
         "(4->6) (4->5) (5->6) (5->7) (6->7). The nodes of subgraph G' are numbered from a to e, and the edges are: "
         "(a->b) (b->c) (b->e) (b->d) (c->e) (c->d). Is subgraph G' present within graph G as a direct substructure?",
         "To determine if subgraph G' is present within graph G, let's briefly analyze both graphs:\n"
         "Subgraph G' has the following edges: (a->b), (b->c), (b->e), (b->d), (c->e), (c->d). The key node here is "
         "'b', which has outgoing edges to three different nodes: 'c', 'e', and 'd'. Additionally, 'c' has outgoing "
         "edges to both 'e' and 'd'.\n"
         "Now let's find a node in graph G with similar outgoing edges: Node 0 has outgoing edges to many nodes but "
         "is not a match since no single node has outgoing edges to three other nodes that also interconnect as "
         "required.\n"
         "Node 1 has outgoing edges to '6', '5', '4', and '7' but none of these nodes have the required "
         "interconnections to match 'c', 'e', and 'd'. Node 2 has outgoing edges to '7', '5', '6', and '3', but "
         "again, no suitable interconnections.\n"
         "Node 3 has outgoing edges to '4', '6', '7', and '5'. This resembles 'b' in G', but there must be "
         "interconnections between the nodes it points to, matching (c->e), (c->d).\n"
         "Node 4 has outgoing edges to '7', '6', and '5'. If node 4 is 'b', then nodes '7', '6', and '5' could be "
         "'c', 'e', and 'd'. Since '7', '6', and '5' are all interconnected, node 4 and its connected nodes match the "
         "structure of G'.\n"
         "Thus, the sequence (4->7), (7->6), (7->5), (6->7), (5->7) in G corresponds to the sequence (b->c), (c->e), "
         "(c->d), (e->d), (d->e) in G', which means subgraph G' is present as a direct substructure in graph G. "
         "### Yes."},
        {"The nodes of graph G are numbered from 0 to 9, and the edges are: (0->6) (0->2) (1->2) (1->7) (1->3) "
         "(3->4) (3->8) (3->9) (4->9). The nodes of subgraph G' are numbered from a to d, and the edges are: (a->d) "
         "(a->c) (a->b) (b->d) (b->c) (c->d). Is subgraph G' present within graph G as a direct substructure?",
         "To find if subgraph G' is present in graph G, we look for a node with out-degree of 3 (like 'a' in G'), and "
         "among those outgoing connections, we need two nodes with an out-degree of at least 2 (like 'b' and 'c' in "
         "G'), which are also connected to each other and to the third node (like 'd' in G').\n"
         "Examining graph G:\n"
         "Node 0 has out-degree 2, not enough to match 'a'.\n"
         "Node 1 has out-degree 3, so it could be 'a', with nodes 2, 7, and 3 potentially being 'b', 'c', and 'd'.\n"
         "Node 3 has out-degree 3, so it could be 'a', with nodes 4, 8, and 9 potentially being 'b', 'c', and 'd'.\n"
         "Now we must check the connections between the potential 'b', 'c', and 'd' nodes:\n"
         "For node 1 as 'a', nodes 2, 7, and 3 do not have the required mutual connections.\n"
         "For node 3 as 'a', nodes 4, 8, and 9 do not have the required mutual connections either, since there's no "
         "edge from 4 to 8 or 9 to 8.\n"
         "None of the nodes satisfy the conditions of subgraph G' fully. ### No."},
    };
    return t;
}

PromptTemplate hamilton_template() {
    PromptTemplate t;
    t.task = Task::hamilton;
    t.header =
        "Determine whether or not there is a Hamiltonian path in an undirected graph.\n"
        "In an undirected graph, (i,j) means that node i and node j are connected with an undirected edge.\n"
        "Given a graph, you need to output 'Yes' or 'No', indicating whether there is a Hamiltonian path in the "
        "graph.";
    t.exemplars = {
        {"The nodes are numbered from 0 to 5, and the edges are: (0, 3) (0, 2) (0, 1) (0, 5) (1, 4) (1, 3) (1, 2) "
         "(3, 5) (4, 5). Is there a Hamiltonian path in this graph?",
         "To determine if a Hamiltonian path exists in an undirected graph, we need to check if there's a path that "
         "visits each node exactly once. Starting at Node 0, we can go to Node 1 (which connects to Nodes 2, 3, 4).\n"
         "From Node 1, moving to Node 4 seems a strategic choice because Node 4 only connects back to Node 1 and to "
         "Node 5. After reaching Node 4, we must go to Node 5.\n"
         "From Node 5, we can go to Node 3, as Node 3 connects to Nodes 0 and 1 (which we've visited) and to Node 5.\n"
         "Finally, from Node 3, we can go to Node 2.\n"
         "So, one possible Hamiltonian path is: [0,1,4,5,3,2].\n"
         "Therefore, there is a Hamiltonian path in this graph. ### Yes, [0,1,4,5,3,2]."},
        {"The nodes are numbered from 0 to 5, and the edges are: (0,2) (0,1) (4,5) (4,3) (4,2) (5,3) (1,4) (2,5). "
         "Is there a Hamiltonian path in this graph?",
         "To determine if a Hamiltonian path exists in an undirected graph, we need to check if there's a path that "
         "visits each node exactly once. We can start at node 0. As node 0 is connected with ndoe 2, and node 2 is "
         "not visited, we can then visit node 2.\n"
         "As node 2 is connected with ndoe 5, and node 5 is not visited, we can then visit node 5.\n"
         "As node 5 is connected with ndoe 3, and node 3 is not visited, we can then visit node 3.\n"
         "As node 3 is connected with ndoe 4, and node 4 is not visited, we can then visit node 4.\n"
         "As node 4 is connected with ndoe 1, and node 1 is not visited, we can then visit node 1.\n"
         "So, one possible Hamiltonian path is: [0,2,5,3,4,1].\n"
         "Therefore, there is a Hamiltonian path in this graph. ### Yes, [0,2,5,3,4,1]."},
    };
    return t;
}

PromptTemplate make_template(Task task) {
    switch (task) {
    case Task::cycle: return cycle_template();
    case Task::connect: return connect_template();
    case Task::bipartite: return bipartite_template();
    case Task::topology: return topology_template();
    case Task::shortest: return shortest_template();
    case Task::triangle: return triangle_template();
    case Task::flow: return flow_template();
    case Task::hamilton: return hamilton_template();
    case Task::subgraph: return subgraph_template();
    }
    throw Error(ErrorKind::invalid_spec, "unknown task");
}

} // namespace

const PromptTemplate& default_template(Task task) {
    static const auto templates = [] {
        std::array<PromptTemplate, kAllTasks.size()> all;
        for (Task t : kAllTasks) all[task_index(t)] = make_template(t);
        return all;
    }();
    return templates.at(task_index(task));
}

PromptTemplate template_with_shots(const PromptTemplate& base, std::size_t shots) {
    PromptTemplate t = base;
    // small graphs keep the extra exemplars short
    GenSpec spec = default_gen_spec(base.task, 0, 0x5eed0000ULL + task_index(base.task));
    const auto range = task_node_range(base.task);
    spec.tiers.assign(kTierCount, TierSpec{std::max(range.min, 4), std::min(range.max, 7), 0.4});
    spec.pattern_nodes = {3, 4};
    spec.split = "shot";
    for (std::size_t index = 0; t.exemplars.size() < shots; ++index) {
        if (index > 10'000) {
            throw Error(ErrorKind::stage, "could not synthesize enough exemplars");
        }
        // alternate labels, starting with the label the last built-in exemplar lacks
        const auto target = label_target(base.task, index + 1);
        auto p = generate_problem(spec, index, problem_seed(spec, index, 0), target);
        if (!p) continue;
        t.exemplars.push_back({render_problem(*p), synthesize_transcript(*p, true, p->seed, index)});
    }
    return t;
}

} // namespace graphreason
