#include "doctest.h"

#include "graphreason/error.hpp"
#include "graphreason/eval.hpp"
#include "graphreason/generate.hpp"
#include "graphreason/transcript.hpp"

#include "json.hpp"

#include <algorithm>

using namespace graphreason;

namespace {

std::vector<Problem> problems_for(std::initializer_list<Task> tasks, std::size_t count, std::uint64_t seed) {
    std::vector<Problem> out;
    for (Task t : tasks) {
        auto got = generate_problems(default_gen_spec(t, count, seed)).problems;
        out.insert(out.end(), got.begin(), got.end());
    }
    return out;
}

class FailingBackend : public Backend {
public:
    std::vector<std::string> complete(const SampleRequest&) override { throw BackendError(500, "down"); }
    std::string name() const override { return "failing"; }
};

} // namespace

TEST_CASE("half correct is fifty percent") {
    const auto problems = problems_for({Task::cycle}, 10, 4);
    std::vector<Prediction> preds;
    for (std::size_t i = 0; i < problems.size(); ++i) {
        preds.push_back({problems[i].id, conclusion(problems[i].task, i % 2 ? problems[i].answer
                                                                             : Answer::boolean(!problems[i].answer.yes))});
    }
    const auto r = evaluate(problems, preds);
    const auto& s = r.per_task[task_index(Task::cycle)];
    CHECK(s.total == 10);
    CHECK(s.correct == 5);
    CHECK(s.accuracy == doctest::Approx(0.5));
    CHECK(r.present[task_index(Task::cycle)]);
    CHECK_FALSE(r.present[task_index(Task::flow)]);
    CHECK(r.average == doctest::Approx(0.5));
    CHECK(r.easy == doctest::Approx(0.5));
}

TEST_CASE("missing, malformed and orphan predictions") {
    const auto problems = problems_for({Task::connect, Task::flow}, 4, 5);
    std::vector<Prediction> preds;
    for (const auto& p : problems) preds.push_back({p.id, conclusion(p.task, p.answer)});
    preds.erase(preds.begin());
    preds[0].output = "I cannot tell.";
    auto r = evaluate(problems, preds);
    const auto& c = r.per_task[task_index(Task::connect)];
    CHECK(c.missing == 1);
    CHECK(c.extraction_failures == 1);
    CHECK(c.correct == 2);
    CHECK(r.per_task[task_index(Task::flow)].correct == 4);

    auto orphan = preds;
    orphan.push_back({"nope-1", "### Yes."});
    try {
        evaluate(problems, orphan);
        FAIL("expected evaluation error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::evaluation);
        CHECK(std::string(e.what()).find("nope-1") != std::string::npos);
    }
    auto dup = preds;
    dup.push_back(preds[1]);
    CHECK_THROWS_AS(evaluate(problems, dup), Error);
}

TEST_CASE("evaluation ignores input order and job count") {
    auto problems = problems_for({Task::shortest, Task::topology, Task::hamilton}, 6, 6);
    std::vector<Prediction> preds;
    Rng rng(3);
    for (const auto& p : problems) {
        const bool right = rng.bernoulli(0.5);
        preds.push_back({p.id, synthesize_transcript(p, right, p.seed, 0)});
    }
    const auto a = report_json(evaluate(problems, preds));
    std::reverse(problems.begin(), problems.end());
    std::rotate(preds.begin(), preds.begin() + 5, preds.end());
    CHECK(report_json(evaluate(problems, preds, {}, 4)) == a);
}

TEST_CASE("stub with no errors reproduces the ground truth") {
    const auto problems = problems_for({Task::cycle, Task::triangle, Task::subgraph}, 5, 7);
    StubBackend stub({1, 0.0, true});
    const auto run = run_eval(problems, stub, 3, nullptr, 2);
    CHECK(run.runs.size() == 3);
    CHECK(run.predictions.size() == problems.size());
    for (Task t : {Task::cycle, Task::triangle, Task::subgraph}) {
        CHECK(run.report.per_task[task_index(t)].accuracy == doctest::Approx(1.0));
        CHECK(run.accuracy_stddev[task_index(t)] == doctest::Approx(0.0));
    }
    CHECK(run.report.average == doctest::Approx(1.0));
    CHECK(run.report.runs == 3);
}

TEST_CASE("backend failures count as incorrect") {
    const auto problems = problems_for({Task::connect}, 3, 8);
    FailingBackend failing;
    const auto run = run_eval(problems, failing, 1);
    CHECK(run.report.backend_errors == 3);
    CHECK(run.report.per_task[task_index(Task::connect)].correct == 0);
}

TEST_CASE("report formats") {
    const auto problems = problems_for({Task::connect, Task::hamilton}, 2, 9);
    std::vector<Prediction> preds;
    for (const auto& p : problems) preds.push_back({p.id, conclusion(p.task, p.answer)});
    const auto r = evaluate(problems, preds);
    const auto text = report_text(r);
    for (const char* s : {"Easy", "Medium", "Hard", "Connect", "Hamilton", "Average", "Accuracy (%)", "Correct/Total"}) {
        CHECK(text.find(s) != std::string::npos);
    }
    const auto j = nlohmann::json::parse(report_json(r));
    CHECK(j["tasks"]["connect"]["accuracy"] == 1.0);
    CHECK(j["tasks"]["connect"]["difficulty"] == "easy");
    CHECK(j["tasks"]["hamilton"]["difficulty"] == "hard");
    CHECK_FALSE(j["tasks"].contains("flow"));
    CHECK(j["average"] == 1.0);
}
