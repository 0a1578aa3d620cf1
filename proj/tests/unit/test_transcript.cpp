#include "doctest.h"

#include "graphreason/generate.hpp"
#include "graphreason/grader.hpp"
#include "graphreason/transcript.hpp"

using namespace graphreason;

TEST_CASE("conclusion lines") {
    CHECK(conclusion(Task::cycle, Answer::boolean(true)) == "### Yes.");
    CHECK(conclusion(Task::connect, Answer::boolean(false)) == "### No.");
    CHECK(conclusion(Task::shortest, Answer::numeric(8)) == "### 8.");
    CHECK(conclusion(Task::topology, Answer::nodes({2, 0, 1})) == "### [2, 0, 1]");
    CHECK(conclusion(Task::triangle, Answer::none()) == "### None.");
    CHECK(conclusion(Task::hamilton, Answer::boolean(true, {WitnessKind::path, {0, 1, 4}})) == "### Yes, [0,1,4].");
}

TEST_CASE("correct transcripts grade correct and cite only real edges") {
    for (Task t : kAllTasks) {
        const auto problems = generate_problems(default_gen_spec(t, 25, 8)).problems;
        for (const auto& p : problems) {
            for (std::size_t variant = 0; variant < 4; ++variant) {
                const auto text = synthesize_transcript(p, true, p.seed + variant, variant);
                const auto v = grade(p, text);
                INFO(p.id, " variant ", variant, "\n", text);
                CHECK(v.correct);
                CHECK(v.step_violations.empty());
            }
        }
    }
}

TEST_CASE("incorrect transcripts grade incorrect") {
    for (Task t : kAllTasks) {
        const auto problems = generate_problems(default_gen_spec(t, 25, 9)).problems;
        for (const auto& p : problems) {
            const auto text = synthesize_transcript(p, false, p.seed, 3);
            INFO(p.id, "\n", text);
            CHECK_FALSE(grade(p, text).correct);
        }
    }
}

TEST_CASE("wrong answers always differ from the truth") {
    const auto problems = generate_problems(default_gen_spec(Task::topology, 30, 2)).problems;
    Rng rng(1);
    for (const auto& p : problems) {
        const auto w = wrong_answer(p.task, p.graph, p.answer, rng);
        CHECK_FALSE(grade_answer(p, w));
    }
}

TEST_CASE("variants change the wording, seeds are reproducible") {
    const auto p = generate_problems(default_gen_spec(Task::connect, 1, 4)).problems.front();
    CHECK(synthesize_transcript(p, true, 5, 0) == synthesize_transcript(p, true, 5, 0));
    CHECK(synthesize_transcript(p, true, 5, 0) != synthesize_transcript(p, true, 5, 1));
}
