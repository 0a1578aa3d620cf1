#pragma once

#include "graphreason/graph.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace graphreason {

enum class AnswerKind {
    yes_no,
    numeric,
    node_sequence,
    none_exists,
    // Hamilton search ran out of budget; such problems never reach a corpus.
    unknown,
};

enum class WitnessKind {
    none,
    path,       // simple path, endpoints inclusive
    cycle,      // closed walk, first == last
    partition,  // side (0/1) per node
    odd_cycle,  // open sequence; last node adjacent to first
    triangle,   // three nodes
    order,      // topological order
    mapping,    // pattern node i -> host node nodes[i]
};

struct Witness {
    WitnessKind kind = WitnessKind::none;
    std::vector<NodeId> nodes;

    bool operator==(const Witness&) const = default;
};

struct Answer {
    AnswerKind kind = AnswerKind::none_exists;
    bool yes = false;
    std::int64_t number = 0;
    // node-sequence answers; also an optional path attached to a yes/numeric answer
    std::vector<NodeId> sequence;
    Witness witness;

    static Answer boolean(bool value, Witness w = {});
    static Answer numeric(std::int64_t value, Witness w = {});
    static Answer nodes(std::vector<NodeId> seq);
    static Answer none();
    static Answer unknown();

    /// Value equality: kind plus the field that kind uses. Witnesses ignored.
    bool same_value(const Answer& other) const;

    bool operator==(const Answer&) const = default;
};

std::string_view answer_kind_name(AnswerKind kind);
std::string_view witness_kind_name(WitnessKind kind);
AnswerKind parse_answer_kind(std::string_view name);
WitnessKind parse_witness_kind(std::string_view name);

/// Short human form, e.g. "Yes", "8", "[0,1,2]", "None".
std::string describe(const Answer& a);

} // namespace graphreason
