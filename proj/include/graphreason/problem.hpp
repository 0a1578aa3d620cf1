#pragma once

#include "graphreason/answer.hpp"
#include "graphreason/graph.hpp"
#include "graphreason/task.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace graphreason {

/// Task parameters. u/v carry the node pair for connect and shortest, and
/// the source/sink for flow.
struct Query {
    std::optional<NodeId> u;
    std::optional<NodeId> v;
    std::optional<Graph> pattern;

    bool operator==(const Query&) const = default;
};

struct Tier {
    int n = 0;
    double p = 0.0;
    Difficulty difficulty = Difficulty::easy;
    // which of the five (node-count, density) bands produced the graph
    int band = 0;

    bool operator==(const Tier&) const = default;
};

struct Problem {
    std::string id;
    Task task = Task::cycle;
    Graph graph;
    Query query;
    Answer answer;
    Tier tier;
    std::uint64_t seed = 0;
};

} // namespace graphreason
