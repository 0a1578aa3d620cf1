#include "graphreason/error.hpp"

namespace graphreason {

std::string_view error_kind_name(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::invalid_spec: return "invalid-spec";
    case ErrorKind::wrong_graph_kind: return "wrong-graph-kind";
    case ErrorKind::invalid_query: return "invalid-query";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::parse: return "parse";
    case ErrorKind::oracle_too_large: return "oracle-too-large";
    case ErrorKind::backend: return "backend";
    case ErrorKind::budget_exceeded: return "budget-exceeded";
    case ErrorKind::assembly: return "assembly";
    case ErrorKind::evaluation: return "evaluation";
    case ErrorKind::io: return "io";
    case ErrorKind::missing_dependency: return "missing-dependency";
    case ErrorKind::stage: return "stage";
    }
    return "unknown";
}

} // namespace graphreason
