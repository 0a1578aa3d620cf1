#include "doctest.h"

#include "graphreason/error.hpp"
#include "graphreason/grader.hpp"
#include "graphreason/solvers.hpp"

#include "../oracle/oracle.hpp"

using namespace graphreason;

namespace {

Graph make(int n, bool directed, std::initializer_list<std::array<int, 3>> edges) {
    Graph g(n, directed);
    for (const auto& e : edges) {
        g.add_edge(e[0], e[1], e[2] > 0 ? std::optional<int>(e[2]) : std::nullopt);
    }
    return g;
}

} // namespace

TEST_CASE("cycle detection needs three distinct nodes") {
    CHECK_FALSE(detect_cycle(make(4, false, {{0, 1, 0}, {1, 2, 0}, {2, 3, 0}})).yes);
    const auto a = detect_cycle(make(4, false, {{0, 1, 0}, {1, 2, 0}, {2, 0, 0}, {2, 3, 0}}));
    CHECK(a.yes);
    REQUIRE(a.witness.kind == WitnessKind::cycle);
    CHECK(a.witness.nodes.front() == a.witness.nodes.back());
    CHECK(a.witness.nodes.size() == 4);
}

TEST_CASE("connectivity") {
    const Graph g = make(5, false, {{0, 1, 0}, {1, 2, 0}, {3, 4, 0}});
    CHECK(is_connected(g, 0, 2).yes);
    CHECK_FALSE(is_connected(g, 0, 4).yes);
    CHECK(is_connected(g, 3, 3).yes);
}

TEST_CASE("bipartite ignores direction and reports an odd cycle") {
    const auto yes = is_bipartite(make(4, true, {{0, 1, 0}, {2, 1, 0}, {2, 3, 0}}));
    CHECK(yes.yes);
    CHECK(yes.witness.kind == WitnessKind::partition);
    const auto no = is_bipartite(make(3, true, {{0, 1, 0}, {1, 2, 0}, {0, 2, 0}}));
    CHECK_FALSE(no.yes);
    CHECK(no.witness.kind == WitnessKind::odd_cycle);
    CHECK(no.witness.nodes.size() % 2 == 1);
}

TEST_CASE("topological sort is the smallest order, none on a cycle") {
    const Graph dag = make(4, true, {{2, 0, 0}, {3, 1, 0}, {0, 1, 0}});
    CHECK(topological_sort(dag).sequence == std::vector<NodeId>{2, 0, 3, 1});
    CHECK(topological_sort(make(3, true, {{0, 1, 0}, {1, 2, 0}, {2, 0, 0}})).kind == AnswerKind::none_exists);
}

TEST_CASE("shortest path weight and witness") {
    const Graph g = make(4, false, {{0, 1, 5}, {0, 2, 1}, {2, 1, 1}, {1, 3, 2}});
    const auto a = shortest_path(g, 0, 3);
    CHECK(a.number == 4);
    CHECK(a.witness.nodes == std::vector<NodeId>{0, 2, 1, 3});
    CHECK(shortest_path(make(3, false, {{0, 1, 2}}), 0, 2).kind == AnswerKind::none_exists);
}

TEST_CASE("triangle sums and max flow") {
    Graph g = make(4, false, {{0, 1, 0}, {1, 2, 0}, {0, 2, 0}, {2, 3, 0}, {1, 3, 0}});
    g.set_node_weights({1, 5, 5, 9});
    CHECK(max_triangle_sum(g).number == 19);
    Graph f = make(4, false, {{0, 1, 0}});
    f.set_node_weights({1, 1, 1, 1});
    CHECK(max_triangle_sum(f).kind == AnswerKind::none_exists);

    const Graph net = make(4, true, {{0, 1, 3}, {0, 2, 2}, {1, 2, 5}, {1, 3, 2}, {2, 3, 3}});
    CHECK(max_flow(net, 0, 3).number == 5);
    CHECK(max_flow(net, 3, 0).number == 0);
}

TEST_CASE("hamilton path with witness and exhausted budget") {
    const Graph path = make(4, false, {{0, 2, 0}, {2, 1, 0}, {1, 3, 0}});
    const auto a = hamilton_path(path);
    CHECK(a.yes);
    CHECK(is_hamilton_path(path, a.witness.nodes));
    CHECK_FALSE(hamilton_path(make(4, false, {{0, 1, 0}, {0, 2, 0}, {0, 3, 0}})).yes);

    const Graph big = generate_er(40, 0.3, false, 5);
    CHECK(hamilton_path(big, {1, 0}).kind == AnswerKind::unknown);
}

TEST_CASE("subgraph matching is non-induced") {
    const Graph host = make(4, true, {{0, 1, 0}, {1, 2, 0}, {0, 2, 0}, {2, 3, 0}});
    const Graph chain = make(3, true, {{0, 1, 0}, {1, 2, 0}});
    const auto a = subgraph_match(host, chain);
    CHECK(a.yes);
    CHECK(a.witness.kind == WitnessKind::mapping);
    const Graph back = make(2, true, {{1, 0, 0}});
    CHECK(subgraph_match(host, back).yes);
    const Graph star = make(4, true, {{0, 1, 0}, {0, 2, 0}, {0, 3, 0}});
    CHECK_FALSE(subgraph_match(host, star).yes);
}

TEST_CASE("solve rejects incomplete queries") {
    const Graph g = make(3, false, {{0, 1, 1}});
    CHECK_THROWS_AS(solve(Task::connect, g, {}), Error);
    CHECK_THROWS_AS(solve(Task::subgraph, Graph(3, true), {}), Error);
}

TEST_CASE("solvers agree with brute force on random small graphs") {
    for (Task t : kAllTasks) {
        for (std::uint64_t i = 0; i < 60; ++i) {
            const auto in = oracle::random_instance(t, 1000 + i, std::min(8, oracle::node_limit(t)));
            std::string why;
            INFO(task_name(t), " instance ", i);
            CHECK_MESSAGE(oracle::agrees(t, in.graph, in.query, solve(t, in.graph, in.query), &why), why);
        }
    }
}

TEST_CASE("oracle refuses oversized inputs") {
    CHECK_THROWS_AS(oracle::solve(Task::flow, generate_er(8, 0.3, true, 1), Query{0, 1, {}}), Error);
    CHECK_THROWS_AS(oracle::solve(Task::cycle, generate_er(11, 0.3, false, 1), {}), Error);
}
