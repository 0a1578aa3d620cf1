#pragma once

#include "graphreason/grader.hpp"
#include "graphreason/problem.hpp"
#include "graphreason/selector.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace graphreason {

inline constexpr int kSchemaVersion = 1;

/// Generation metadata copied into every training record.
struct RecordMeta {
    int n = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
    int band = 0;
    Difficulty difficulty = Difficulty::easy;

    bool operator==(const RecordMeta&) const = default;
};

RecordMeta meta_of(const Problem& p);

/// Every completion sampled for one problem, with its verdict.
struct RawPaths {
    std::string id;
    Task task = Task::cycle;
    std::string profile;
    std::vector<std::string> outputs;
    std::vector<bool> correct;

    bool operator==(const RawPaths&) const = default;
};

struct SftRecord {
    std::string id;
    Task task = Task::cycle;
    std::string instruction;
    std::string output;
    RecordMeta meta;
    std::size_t path_index = 0;
    // selection strategies that nominated this path ("anchor", "edit", ...)
    std::vector<std::string> strategies;

    bool operator==(const SftRecord&) const = default;
};

struct DpoRecord {
    std::string id;
    Task task = Task::cycle;
    std::string instruction;
    std::string chosen;
    std::string rejected;
    RecordMeta meta;
    // metric -> index of the nominated incorrect sample
    std::map<std::string, std::size_t> votes;
    std::size_t correct_samples = 0;
    std::size_t incorrect_samples = 0;

    bool operator==(const DpoRecord&) const = default;
};

struct Prediction {
    std::string id;
    std::string output;

    bool operator==(const Prediction&) const = default;
};

// One JSON object per line; keys in a fixed order.
std::string to_json_line(const Problem& p);
std::string to_json_line(const RawPaths& r);
std::string to_json_line(const SftRecord& r);
std::string to_json_line(const DpoRecord& r);
std::string to_json_line(const Prediction& r);

/// Parses one line. Throws Error(io) on malformed JSON or a schema mismatch.
template <typename T>
T from_json_line(std::string_view line);

template <typename T>
void write_jsonl(const std::filesystem::path& path, const std::vector<T>& records);

/// Throws Error(missing_dependency) when the file does not exist and LineError
/// (1-based) on the first bad line.
template <typename T>
std::vector<T> read_jsonl(const std::filesystem::path& path);

/// One record per (problem, path), ordered by (task, id, path_index). Every
/// path is re-graded; an incorrect one throws Error(assembly) naming it.
/// `paths` maps problem id to its selected texts; `strategies`, when given,
/// holds the nominating strategies for each text in the same layout.
std::vector<SftRecord> assemble_sft(const std::vector<Problem>& problems,
                                    const std::map<std::string, std::vector<std::string>>& paths,
                                    const std::map<std::string, std::vector<std::vector<std::string>>>& strategies = {},
                                    const GradeOptions& options = {});

struct DpoCandidate {
    std::string id;
    std::string chosen;
    std::string rejected;
    std::map<std::string, std::size_t> votes;
    std::size_t correct_samples = 0;
    std::size_t incorrect_samples = 0;
};

struct DpoAssembly {
    std::vector<DpoRecord> records;
    // problems whose samples held no incorrect path
    std::size_t skipped_no_incorrect = 0;
    // problems whose samples held no correct path
    std::size_t skipped_no_correct = 0;
    std::vector<std::string> skipped_ids;
};

/// Builds the preference pair for one problem from its sampled completions:
/// chosen = longest correct, rejected = majority-vote closest incorrect.
/// Returns nullopt and updates the skip counters of `into` when no pair exists.
std::optional<DpoCandidate> build_dpo_candidate(const Problem& p, const std::vector<std::string>& samples,
                                                EmbeddingProvider* provider, DpoAssembly& into,
                                                const GradeOptions& options = {});

/// Validates the pairs (chosen correct, rejected incorrect, texts differ) and
/// orders them by (task, id). Throws Error(assembly) on a violation.
std::vector<DpoRecord> assemble_dpo(const std::vector<Problem>& problems, const std::vector<DpoCandidate>& pairs,
                                    const GradeOptions& options = {});

struct TaskStats {
    std::size_t problems = 0;
    std::size_t nodes = 0;
    std::size_t paths = 0;

    bool operator==(const TaskStats&) const = default;
};

struct DatasetStats {
    std::array<TaskStats, 9> per_task{};
    TaskStats total;
};

DatasetStats compute_stats(const std::vector<Problem>& problems);
DatasetStats compute_stats(const std::vector<SftRecord>& records);
DatasetStats compute_stats(const std::vector<DpoRecord>& records);

/// Aligned table with rows "Total G-Q", "Total V", "Total R" and one column per task plus "Sum".
std::string render_stats_table(const DatasetStats& stats);

struct AuditFinding {
    std::string id;
    std::string field;   // "output", "chosen" or "rejected"
    std::size_t path_index = 0;
    StepViolation violation;
};

struct AuditReport {
    std::size_t records_checked = 0;
    // grading invariant breaches: SFT output or DPO chosen incorrect, DPO rejected correct
    std::vector<std::string> grading_failures;
    std::vector<AuditFinding> findings;
};

/// Re-grades every record and audits its reasoning steps against the problem graph.
AuditReport audit_corpus(const std::vector<Problem>& problems, const std::vector<SftRecord>& sft,
                         const std::vector<DpoRecord>& dpo, const GradeOptions& options = {});

} // namespace graphreason
