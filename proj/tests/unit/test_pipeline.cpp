#include "doctest.h"

#include "graphreason/error.hpp"
#include "graphreason/pipeline.hpp"

#include "util.hpp"

#include <fstream>
#include <functional>
#include <iterator>

using namespace graphreason;
namespace fs = std::filesystem;

namespace {

PipelineConfig small(const fs::path& out, std::initializer_list<Task> tasks, std::size_t count) {
    PipelineConfig c;
    c.out = out;
    c.tasks.assign(tasks);
    c.count = count;
    c.seed = 13;
    c.jobs = 2;
    return c;
}

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::stage;
}

} // namespace

TEST_CASE("config file") {
    const auto dir = unit::scratch("config");
    std::ofstream(dir / "c.json") << R"({"tasks": "cycle,flow", "count": 7, "seed": 3, "cap": 2,
        "backend": "stub", "error_rate": 0.25, "http": {"model": "m", "max_requests": 9}})";
    const auto c = load_config(dir / "c.json");
    CHECK(c.tasks == std::vector<Task>{Task::cycle, Task::flow});
    CHECK(c.count == 7u);
    CHECK(c.seed == 3);
    CHECK(c.cap == 2);
    CHECK(c.error_rate == 0.25);
    CHECK(c.http.model == "m");
    CHECK(c.http.max_requests == 9);
    CHECK(c.split == "train");

    std::ofstream(dir / "bad.json") << R"({"taks": "cycle"})";
    CHECK(kind_of([&] { load_config(dir / "bad.json"); }) == ErrorKind::invalid_spec);
    CHECK(kind_of([&] { load_config(dir / "none.json"); }) == ErrorKind::missing_dependency);
    std::ofstream(dir / "all.json") << R"({"tasks": "all", "split": "test"})";
    const auto all = load_config(dir / "all.json");
    CHECK(all.tasks.size() == 9);
    CHECK(problems_per_task(all) == 400);
    CHECK(problems_per_task(PipelineConfig{}) == 3000);
}

TEST_CASE("validation and backends") {
    PipelineConfig c;
    c.error_rate = 1.5;
    CHECK(kind_of([&] { validate(c); }) == ErrorKind::invalid_spec);
    c.error_rate = 0;
    c.cap = 0;
    CHECK(kind_of([&] { validate(c); }) == ErrorKind::invalid_spec);
    c.cap = 5;
    CHECK(make_backend(c)->name() == "stub");
    c.backend = BackendKind::http;
    c.http.api_key_env = "GRAPHREASON_SURELY_UNSET_KEY";
    CHECK(kind_of([&] { make_backend(c); }) == ErrorKind::invalid_spec);
}

TEST_CASE("stages need their inputs") {
    const auto dir = unit::scratch("missing");
    const auto c = small(dir, {Task::connect}, 2);
    CHECK(kind_of([&] { cmd_annotate(c); }) == ErrorKind::missing_dependency);
    CHECK(kind_of([&] { cmd_select(c); }) == ErrorKind::missing_dependency);
    CHECK(kind_of([&] { cmd_dpo(c); }) == ErrorKind::missing_dependency);
    CHECK(kind_of([&] { cmd_evaluate(c); }) == ErrorKind::missing_dependency);
    CHECK(kind_of([&] { cmd_stats(c); }) == ErrorKind::missing_dependency);
    CHECK(kind_of([&] { cmd_audit(c); }) == ErrorKind::missing_dependency);
}

TEST_CASE("end to end with the stub") {
    const auto dir = unit::scratch("e2e");
    auto c = small(dir, {Task::connect, Task::shortest}, 6);
    c.error_rate = 0.3;
    const auto g = cmd_generate(c);
    CHECK(g.problems == 12);
    auto bytes = [&] {
        std::ifstream in(dir / kProblemsFile, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    const auto first = bytes();
    cmd_generate(c);
    CHECK(bytes() == first);

    const auto a = cmd_annotate(c);
    CHECK(a.paths == 36);
    CHECK(a.correct_paths > 0);
    const auto s = cmd_select(c);
    CHECK(s.records > 0);
    for (const auto& r : read_jsonl<SftRecord>(dir / kSftFile)) {
        CHECK(r.strategies.size() >= 1);
        CHECK(r.path_index < 5);
    }
    const auto d = cmd_dpo(c);
    CHECK(d.pairs + d.skipped_no_correct + d.skipped_no_incorrect == 12);
    const auto stats = cmd_stats(c);
    CHECK(stats.find("Total G-Q") != std::string::npos);
    const auto audit = cmd_audit(c);
    CHECK(audit.grading_failures.empty());
    CHECK(fs::exists(dir / kAuditFile));

    c.error_rate = 0;
    const auto r = cmd_evaluate(c);
    CHECK(r.average == doctest::Approx(1.0));
    CHECK(fs::exists(dir / kReportJson));
    CHECK(fs::exists(dir / kReportText));
    CHECK(fs::exists(dir / kPredictionsFile));

    c.predictions = dir / kPredictionsFile;
    CHECK(cmd_evaluate(c).average == doctest::Approx(1.0));
}

TEST_CASE("dpo with a perfect sampler yields no pairs and reports the skips") {
    const auto dir = unit::scratch("dpo-skip");
    auto c = small(dir, {Task::cycle}, 4);
    cmd_generate(c);
    const auto d = cmd_dpo(c);
    CHECK(d.pairs == 0);
    CHECK(d.skipped_no_incorrect == 4);
    CHECK(d.skipped_ids.size() == 4);
    CHECK(read_jsonl<DpoRecord>(dir / kDpoFile).empty());
}

TEST_CASE("binary labels are balanced") {
    const auto dir = unit::scratch("balance");
    auto c = small(dir, {Task::cycle}, 10);
    cmd_generate(c);
    std::size_t yes = 0;
    for (const auto& p : read_jsonl<Problem>(dir / kProblemsFile)) yes += p.answer.yes;
    CHECK(yes == 5);
}
