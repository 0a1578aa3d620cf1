#pragma once

#include "graphreason/answer.hpp"
#include "graphreason/graph.hpp"
#include "graphreason/problem.hpp"
#include "graphreason/rng.hpp"
#include "graphreason/task.hpp"

#include <cstdint>
#include <string>

namespace graphreason {

/// Conclusion line in the "### ..." convention, e.g. "### Yes.", "### 8.",
/// "### Yes, [0,1,4,5,3,2]." or "### [2, 0, 1]".
std::string conclusion(Task task, const Answer& a);

/// A plausible wrong answer: flipped label, numeric off by 1..3, reversed or
/// truncated order. Always grades incorrect against `truth`.
Answer wrong_answer(Task task, const Graph& g, const Answer& truth, Rng& rng);

/// Step-by-step reasoning text ending in a conclusion. Correct transcripts
/// only cite edges that exist. Incorrect ones reach a wrong conclusion without
/// citing specific edges. `variant` picks the wording so that different
/// variants of one problem yield different texts.
std::string synthesize_transcript(Task task, const Graph& g, const Query& q, const Answer& truth, bool correct,
                                  std::uint64_t seed, std::size_t variant = 0);

inline std::string synthesize_transcript(const Problem& p, bool correct, std::uint64_t seed,
                                         std::size_t variant = 0) {
    return synthesize_transcript(p.task, p.graph, p.query, p.answer, correct, seed, variant);
}

} // namespace graphreason
