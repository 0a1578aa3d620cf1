#include "graphreason/task.hpp"

#include "graphreason/error.hpp"

#include <string>

namespace graphreason {

std::string_view task_name(Task task) {
    switch (task) {
    case Task::cycle: return "cycle";
    case Task::connect: return "connect";
    case Task::bipartite: return "bipartite";
    case Task::topology: return "topology";
    case Task::shortest: return "shortest";
    case Task::triangle: return "triangle";
    case Task::flow: return "flow";
    case Task::hamilton: return "hamilton";
    case Task::subgraph: return "subgraph";
    }
    return "unknown";
}

Task parse_task(std::string_view name) {
    for (auto t : kAllTasks) {
        if (task_name(t) == name) {
            return t;
        }
    }
    throw Error(ErrorKind::invalid_spec, "unknown task '" + std::string(name) + "'");
}

std::string_view difficulty_name(Difficulty d) {
    switch (d) {
    case Difficulty::easy: return "easy";
    case Difficulty::medium: return "medium";
    case Difficulty::hard: return "hard";
    }
    return "unknown";
}

Difficulty parse_difficulty(std::string_view name) {
    if (name == "easy") return Difficulty::easy;
    if (name == "medium") return Difficulty::medium;
    if (name == "hard") return Difficulty::hard;
    throw Error(ErrorKind::invalid_spec, "unknown difficulty '" + std::string(name) + "'");
}

Difficulty task_difficulty(Task task) {
    switch (task) {
    case Task::cycle:
    case Task::connect:
    case Task::bipartite:
    case Task::topology: return Difficulty::easy;
    case Task::shortest:
    case Task::triangle:
    case Task::flow: return Difficulty::medium;
    case Task::hamilton:
    case Task::subgraph: return Difficulty::hard;
    }
    return Difficulty::easy;
}

NodeRange task_node_range(Task task) {
    switch (task) {
    case Task::cycle:
    case Task::connect:
    case Task::bipartite:
    case Task::shortest: return {2, 100};
    case Task::topology:
    case Task::flow:
    case Task::hamilton: return {2, 50};
    case Task::triangle: return {2, 25};
    case Task::subgraph: return {2, 30};
    }
    return {2, 100};
}

bool is_binary(Task task) {
    switch (task) {
    case Task::cycle:
    case Task::connect:
    case Task::bipartite:
    case Task::hamilton:
    case Task::subgraph: return true;
    default: return false;
    }
}

bool task_is_directed(Task task) {
    switch (task) {
    case Task::bipartite:
    case Task::topology:
    case Task::flow:
    case Task::subgraph: return true;
    default: return false;
    }
}

} // namespace graphreason
