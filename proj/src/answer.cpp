#include "graphreason/answer.hpp"

#include "graphreason/error.hpp"

namespace graphreason {

Answer Answer::boolean(bool value, Witness w) {
    Answer a;
    a.kind = AnswerKind::yes_no;
    a.yes = value;
    a.witness = std::move(w);
    return a;
}

Answer Answer::numeric(std::int64_t value, Witness w) {
    Answer a;
    a.kind = AnswerKind::numeric;
    a.number = value;
    a.witness = std::move(w);
    return a;
}

Answer Answer::nodes(std::vector<NodeId> seq) {
    Answer a;
    a.kind = AnswerKind::node_sequence;
    a.witness = {WitnessKind::order, seq};
    a.sequence = std::move(seq);
    return a;
}

Answer Answer::none() { return Answer{}; }

Answer Answer::unknown() {
    Answer a;
    a.kind = AnswerKind::unknown;
    return a;
}

bool Answer::same_value(const Answer& other) const {
    if (kind != other.kind) {
        return false;
    }
    switch (kind) {
    case AnswerKind::yes_no: return yes == other.yes;
    case AnswerKind::numeric: return number == other.number;
    case AnswerKind::node_sequence: return sequence == other.sequence;
    case AnswerKind::none_exists:
    case AnswerKind::unknown: return true;
    }
    return false;
}

std::string_view answer_kind_name(AnswerKind kind) {
    switch (kind) {
    case AnswerKind::yes_no: return "yes-no";
    case AnswerKind::numeric: return "numeric";
    case AnswerKind::node_sequence: return "node-sequence";
    case AnswerKind::none_exists: return "none-exists";
    case AnswerKind::unknown: return "unknown";
    }
    return "unknown";
}

std::string_view witness_kind_name(WitnessKind kind) {
    switch (kind) {
    case WitnessKind::none: return "none";
    case WitnessKind::path: return "path";
    case WitnessKind::cycle: return "cycle";
    case WitnessKind::partition: return "partition";
    case WitnessKind::odd_cycle: return "odd-cycle";
    case WitnessKind::triangle: return "triangle";
    case WitnessKind::order: return "order";
    case WitnessKind::mapping: return "mapping";
    }
    return "none";
}

AnswerKind parse_answer_kind(std::string_view name) {
    for (auto k : {AnswerKind::yes_no, AnswerKind::numeric, AnswerKind::node_sequence, AnswerKind::none_exists,
                   AnswerKind::unknown}) {
        if (answer_kind_name(k) == name) {
            return k;
        }
    }
    throw Error(ErrorKind::invalid_input, "unknown answer kind '" + std::string(name) + "'");
}

WitnessKind parse_witness_kind(std::string_view name) {
    for (auto k : {WitnessKind::none, WitnessKind::path, WitnessKind::cycle, WitnessKind::partition,
                   WitnessKind::odd_cycle, WitnessKind::triangle, WitnessKind::order, WitnessKind::mapping}) {
        if (witness_kind_name(k) == name) {
            return k;
        }
    }
    throw Error(ErrorKind::invalid_input, "unknown witness kind '" + std::string(name) + "'");
}

namespace {

std::string join_nodes(const std::vector<NodeId>& nodes) {
    std::string s = "[";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(nodes[i]);
    }
    return s + "]";
}

} // namespace

std::string describe(const Answer& a) {
    switch (a.kind) {
    case AnswerKind::yes_no: return a.yes ? "Yes" : "No";
    case AnswerKind::numeric: return std::to_string(a.number);
    case AnswerKind::node_sequence: return join_nodes(a.sequence);
    case AnswerKind::none_exists: return "None";
    case AnswerKind::unknown: return "Unknown";
    }
    return "";
}

} // namespace graphreason
