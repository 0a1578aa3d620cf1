#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace graphreason {

enum class ErrorKind {
    invalid_spec,
    wrong_graph_kind,
    invalid_query,
    invalid_input,
    parse,
    oracle_too_large,
    backend,
    budget_exceeded,
    assembly,
    evaluation,
    io,
    missing_dependency,
    stage,
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Parse failure in problem text; offset is the byte position of the fault.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& message)
        : Error(ErrorKind::parse, message + " (at byte " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Malformed JSONL input; line is 1-based.
class LineError : public Error {
public:
    LineError(std::size_t line, const std::string& message)
        : Error(ErrorKind::io, "line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Sampler transport or endpoint failure. status is 0 when no HTTP response arrived.
class BackendError : public Error {
public:
    BackendError(int status, const std::string& message)
        : Error(ErrorKind::backend, message), status_(status) {}

    int status() const noexcept { return status_; }

private:
    int status_;
};

} // namespace graphreason
