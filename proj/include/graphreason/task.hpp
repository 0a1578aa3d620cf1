#pragma once

#include <array>
#include <string_view>

namespace graphreason {

enum class Task {
    cycle,
    connect,
    bipartite,
    topology,
    shortest,
    triangle,
    flow,
    hamilton,
    subgraph,
};

inline constexpr std::array<Task, 9> kAllTasks = {
    Task::cycle,    Task::connect,  Task::bipartite, Task::topology, Task::shortest,
    Task::triangle, Task::flow,     Task::hamilton,  Task::subgraph,
};

enum class Difficulty { easy, medium, hard };

struct NodeRange {
    int min;
    int max;
};

std::string_view task_name(Task task);
/// Throws Error(invalid_spec) on an unknown name.
Task parse_task(std::string_view name);

std::string_view difficulty_name(Difficulty d);
Difficulty parse_difficulty(std::string_view name);

Difficulty task_difficulty(Task task);
/// Inclusive node-count bounds for generated graphs of this task.
NodeRange task_node_range(Task task);
/// Yes/No tasks, which are label-balanced at generation time.
bool is_binary(Task task);
bool task_is_directed(Task task);

constexpr std::size_t task_index(Task task) { return static_cast<std::size_t>(task); }

} // namespace graphreason
