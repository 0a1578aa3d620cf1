#pragma once

#include "graphreason/corpus.hpp"
#include "graphreason/grader.hpp"
#include "graphreason/problem.hpp"
#include "graphreason/sampler.hpp"

#include <array>
#include <string>
#include <vector>

namespace graphreason {

struct TaskScore {
    std::size_t total = 0;
    std::size_t correct = 0;
    double accuracy = 0.0;
    std::size_t extraction_failures = 0;
    std::size_t step_violations = 0;
    std::size_t missing = 0;   // problems without a prediction
    // correct / total per node-count band
    std::array<std::size_t, 5> band_total{};
    std::array<std::size_t, 5> band_correct{};
};

struct EvalReport {
    std::array<TaskScore, 9> per_task{};
    std::array<bool, 9> present{};
    double easy = 0.0;
    double medium = 0.0;
    double hard = 0.0;
    // mean of the per-task accuracies over the tasks present in the problem set
    double average = 0.0;
    std::size_t backend_errors = 0;
    std::size_t runs = 1;
};

/// Grades every problem against its prediction. Predictions for unknown ids
/// throw Error(evaluation) listing them; problems without a prediction and
/// unparseable answers count as incorrect. Order of either input is irrelevant.
EvalReport evaluate(const std::vector<Problem>& problems, const std::vector<Prediction>& predictions,
                    const GradeOptions& options = {}, int jobs = 1);

std::string report_json(const EvalReport& report);
/// Aligned table: one column per task plus Average, with the easy/medium/hard
/// grouping above the task names.
std::string report_text(const EvalReport& report);

struct EvalRun {
    EvalReport report;                  // averaged over repetitions
    std::vector<EvalReport> runs;
    std::array<double, 9> accuracy_stddev{};
    std::vector<Prediction> predictions;   // from the first repetition
};

/// Samples one completion per problem under the eval profile from the wrapped
/// instruction prompt, grades, and averages `repetitions` runs. Backend errors
/// leave an empty prediction and are tallied in report.backend_errors.
EvalRun run_eval(const std::vector<Problem>& problems, Backend& backend, std::size_t repetitions = 1,
                 SampleCache* cache = nullptr, int jobs = 1, const GradeOptions& options = {});

} // namespace graphreason
