#pragma once

#include "graphreason/graph.hpp"
#include "graphreason/problem.hpp"
#include "graphreason/solvers.hpp"
#include "graphreason/task.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace graphreason {

/// One (node-count band, edge density) combination.
struct TierSpec {
    int min_nodes = 2;
    int max_nodes = 2;
    double p = 0.3;
};

struct GenSpec {
    Task task = Task::cycle;
    NodeRange node_range{2, 100};
    // exactly five; problem i uses tiers[i % 5]
    std::vector<TierSpec> tiers;
    WeightRange weight_range{};
    std::uint64_t seed = 0;
    std::size_t count = 0;
    // pattern-graph sizes for subgraph matching
    NodeRange pattern_nodes{3, 6};
    std::size_t token_budget = 4096;
    HamiltonOptions hamilton{};
    std::size_t max_attempts = 2000;
    // appears in problem ids, e.g. "flow-test-00012"
    std::string split = "test";
};

inline constexpr std::size_t kTierCount = 5;

/// Splits the task's node range into five equal bands with densities cycling
/// through 0.15, 0.3, 0.5. A band's density is lowered when the expected
/// rendering of its largest graph would exceed 75% of the token budget.
std::vector<TierSpec> default_tiers(Task task, std::size_t token_budget = 4096);
GenSpec default_gen_spec(Task task, std::size_t count, std::uint64_t seed);

/// Throws Error(invalid_spec) when the spec breaks an invariant.
void validate(const GenSpec& spec);

enum class LabelTarget { any, yes, no };

/// Label that problem `index` must carry so binary tasks come out balanced.
LabelTarget label_target(Task task, std::size_t index);

/// Builds one problem from an explicit seed. Returns nullopt when this seed
/// cannot meet the label target, the length budget, or the Hamilton budget.
std::optional<Problem> generate_problem(const GenSpec& spec, std::size_t index, std::uint64_t seed,
                                        LabelTarget target);

/// Seed of attempt `attempt` for problem `index`.
std::uint64_t problem_seed(const GenSpec& spec, std::size_t index, std::size_t attempt);

/// Deduplication key: canonical key of the graph, plus the pattern for subgraph problems.
std::string problem_key(const Problem& p);

struct GenerationStats {
    std::size_t attempts = 0;
    std::size_t rejected = 0;    // label / length / Hamilton budget
    std::size_t duplicates = 0;
};

struct GenerationResult {
    std::vector<Problem> problems;
    GenerationStats stats;
};

/// Generates spec.count problems: solved, label-balanced, length-filtered,
/// and unique against `seen` (which is updated). The output does not depend
/// on `jobs`. Throws Error(stage) if a problem exhausts max_attempts.
GenerationResult generate_problems(const GenSpec& spec, std::unordered_set<std::string>& seen, int jobs = 1);
GenerationResult generate_problems(const GenSpec& spec, int jobs = 1);

} // namespace graphreason
