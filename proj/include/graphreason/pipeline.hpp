#pragma once

#include "graphreason/corpus.hpp"
#include "graphreason/eval.hpp"
#include "graphreason/generate.hpp"
#include "graphreason/sampler.hpp"
#include "graphreason/task.hpp"
#include "graphreason/textgen.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace graphreason {

enum class BackendKind { stub, http };

struct PipelineConfig {
    std::vector<Task> tasks{kAllTasks.begin(), kAllTasks.end()};
    // problems per task; unset means 3000 for train and 400 for test
    std::optional<std::size_t> count;
    std::string split = "train";
    std::uint64_t seed = 0;
    int jobs = 1;
    std::size_t token_budget = kDefaultTokenBudget;
    std::filesystem::path out = "out";

    BackendKind backend = BackendKind::stub;
    double error_rate = 0.0;   // stub only
    HttpOptions http;
    bool use_cache = true;

    // annotate
    Profile annotate_profile = Profile::initial;
    std::size_t shots = 2;
    // select
    std::size_t cap = 5;
    // evaluate
    std::optional<std::filesystem::path> predictions;
    std::size_t repetitions = 1;
    GradeOptions grading;
};

/// Reads a JSON object whose keys mirror the command-line flags
/// (tasks, count, split, seed, jobs, backend, error_rate, cap, out, ...).
/// Keys absent from the file keep the values already in `base`.
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = PipelineConfig{});
void validate(const PipelineConfig& config);
std::size_t problems_per_task(const PipelineConfig& config);

std::unique_ptr<Backend> make_backend(const PipelineConfig& config);

// Stage files inside config.out.
inline constexpr const char* kProblemsFile = "problems.jsonl";
inline constexpr const char* kRawPathsFile = "raw-paths.jsonl";
inline constexpr const char* kSftFile = "sft.jsonl";
inline constexpr const char* kDpoFile = "dpo.jsonl";
inline constexpr const char* kPredictionsFile = "predictions.jsonl";
inline constexpr const char* kReportJson = "report.json";
inline constexpr const char* kReportText = "report.txt";
inline constexpr const char* kCacheFile = "sample-cache.jsonl";
inline constexpr const char* kAuditFile = "audit.json";

struct GenerateSummary {
    std::size_t problems = 0;
    std::array<GenerationStats, 9> per_task{};
    std::string table;
};

struct AnnotateSummary {
    std::size_t problems = 0;
    std::size_t paths = 0;
    std::size_t correct_paths = 0;
    std::size_t backend_calls = 0;
    std::size_t cache_hits = 0;
};

struct SelectSummary {
    std::size_t records = 0;
    std::size_t problems_kept = 0;
    std::size_t problems_without_correct = 0;
    std::string table;
};

struct DpoSummary {
    std::size_t pairs = 0;
    std::array<std::size_t, 9> pairs_per_task{};
    // problems whose samples held at least one incorrect path
    std::array<std::size_t, 9> with_incorrect{};
    std::size_t skipped_no_incorrect = 0;
    std::size_t skipped_no_correct = 0;
    std::vector<std::string> skipped_ids;
    std::size_t backend_calls = 0;
    std::size_t cache_hits = 0;
};

GenerateSummary cmd_generate(const PipelineConfig& config);
AnnotateSummary cmd_annotate(const PipelineConfig& config);
SelectSummary cmd_select(const PipelineConfig& config);
DpoSummary cmd_dpo(const PipelineConfig& config);
/// Grades config.predictions when set, otherwise samples predictions from the backend.
EvalReport cmd_evaluate(const PipelineConfig& config);
/// Tables for whichever of problems/sft/dpo exist in config.out.
std::string cmd_stats(const PipelineConfig& config);
AuditReport cmd_audit(const PipelineConfig& config);

} // namespace graphreason
