#pragma once

#include "graphreason/graph.hpp"
#include "graphreason/problem.hpp"
#include "graphreason/task.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace graphreason {

/// Natural-language question for a graph problem, e.g.
/// "The nodes are numbered from 0 to 5, and the edges are: (0,1) (1,2). Is there a cycle in this graph?"
/// Byte-stable for a given (task, graph, query).
std::string render_question(Task task, const Graph& g, const Query& q);
std::string render_problem(const Problem& p);

/// Edge list as the question shows it, e.g. "(0,1) (1,2)" or "(0->2,3) (0->1,9)".
std::string render_edges(const Graph& g, bool spaced = false);

/// Instruction frame used for training and evaluation prompts.
/// Throws Error(invalid_input) if the text is already wrapped.
std::string wrap_instruction(std::string_view question);

struct Exemplar {
    std::string question;
    std::string answer;
};

struct PromptTemplate {
    Task task = Task::cycle;
    std::string header;
    // line introducing the few-shot block
    std::string intro = "Below are several examples:";
    std::vector<Exemplar> exemplars;
    std::string answer_marker = "###";

    /// Zero shots gives the "Let's think step by step" form; otherwise the
    /// first `shots` exemplars precede "Q: <question>\nA:".
    /// Throws Error(invalid_spec) if fewer exemplars are available.
    std::string render(std::string_view question, std::size_t shots) const;
};

/// Built-in template per task: header plus two worked exemplars.
const PromptTemplate& default_template(Task task);

/// Template extended to `shots` exemplars; exemplars beyond the built-in two
/// are synthesized deterministically from small generated problems.
PromptTemplate template_with_shots(const PromptTemplate& base, std::size_t shots);

std::string build_cot_prompt(Task task, const Problem& p, std::size_t shots);
std::string build_cot_prompt(const PromptTemplate& tmpl, const Problem& p, std::size_t shots);
/// Name-based overload; throws Error(invalid_spec) on an unknown task name.
std::string build_cot_prompt(std::string_view task, const Problem& p, std::size_t shots);

struct ParsedProblem {
    Task task = Task::cycle;
    Graph graph;
    Query query;
};

/// Inverse of render_question. Throws ParseError with the byte offset of the
/// first malformed token or out-of-range node id.
ParsedProblem parse_problem(std::string_view text);

/// The problem statement inside a prompt: the instruction body of a wrapped
/// prompt, else the text after the last "Q: ", else the whole text.
std::string_view extract_question(std::string_view prompt);

/// Token estimate used by the length filter: ceil(bytes / 4).
std::size_t estimate_tokens(std::string_view text);

inline constexpr std::size_t kDefaultTokenBudget = 4096;

} // namespace graphreason
