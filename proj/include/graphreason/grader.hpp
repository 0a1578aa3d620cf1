#pragma once

#include "graphreason/answer.hpp"
#include "graphreason/graph.hpp"
#include "graphreason/problem.hpp"
#include "graphreason/task.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace graphreason {

/// Final answer of a reasoning text: the part after the last "###", or after
/// the last "the answer is" when no marker exists. nullopt means extraction
/// failed. A bracketed node list next to a Yes or a number lands in `sequence`.
std::optional<Answer> extract_answer(std::string_view text, Task task);

enum class ViolationKind { node_out_of_range, missing_edge, weight_mismatch };

std::string_view violation_kind_name(ViolationKind kind);
ViolationKind parse_violation_kind(std::string_view name);

struct StepViolation {
    std::size_t sentence = 0;   // 0-based
    ViolationKind kind = ViolationKind::missing_edge;
    std::string detail;

    bool operator==(const StepViolation&) const = default;
};

/// Graph facts claimed in the reasoning that the graph contradicts: node ids
/// out of range, cited edges that do not exist, weights that differ.
/// Recognizes "node i is connected to node j", tuples (i,j) (i,j,k) (i->j)
/// (i->j,k), and chains [a->b->c].
std::vector<StepViolation> audit_steps(const Graph& g, std::string_view reasoning);
inline std::vector<StepViolation> audit_steps(const Problem& p, std::string_view reasoning) {
    return audit_steps(p.graph, reasoning);
}

struct GradeOptions {
    // check Hamilton paths and shortest paths that accompany an answer
    bool validate_witness = true;
};

struct Verdict {
    bool correct = false;
    std::optional<Answer> extracted;
    bool extraction_failed = false;
    std::vector<StepViolation> step_violations;
};

/// Judges an extracted answer against the problem's ground truth.
bool grade_answer(const Problem& p, const Answer& extracted, const GradeOptions& options = {});

/// Extraction, grading and step audit in one pass. Violations never change `correct`.
Verdict grade(const Problem& p, std::string_view text, const GradeOptions& options = {});

// Independent witness checks.
bool is_simple_path(const Graph& g, const std::vector<NodeId>& path);
bool is_hamilton_path(const Graph& g, const std::vector<NodeId>& path);
bool is_topological_order(const Graph& g, const std::vector<NodeId>& order);
/// Sum of edge weights along the path; nullopt if an edge is missing or unweighted.
std::optional<std::int64_t> path_weight(const Graph& g, const std::vector<NodeId>& path);

/// True when the answer's witness certifies its value on this problem.
/// Answers without a witness pass.
bool witness_valid(Task task, const Graph& g, const Query& q, const Answer& a);

} // namespace graphreason
