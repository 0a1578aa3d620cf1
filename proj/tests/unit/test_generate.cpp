#include "doctest.h"

#include "graphreason/error.hpp"
#include "graphreason/generate.hpp"
#include "graphreason/textgen.hpp"

#include <set>

using namespace graphreason;

TEST_CASE("default tiers split the node range into five bands") {
    for (Task t : kAllTasks) {
        const auto tiers = default_tiers(t);
        const auto range = task_node_range(t);
        REQUIRE(tiers.size() == kTierCount);
        CHECK(tiers.front().min_nodes == range.min);
        CHECK(tiers.back().max_nodes == range.max);
        for (std::size_t i = 1; i < tiers.size(); ++i) CHECK(tiers[i].min_nodes == tiers[i - 1].max_nodes + 1);
        for (const auto& tier : tiers) CHECK((tier.p > 0.0 && tier.p <= 0.5));
    }
    // small graphs keep the full density cycle
    const auto tri = default_tiers(Task::triangle);
    CHECK(tri[0].p == 0.15);
    CHECK(tri[1].p == 0.3);
    CHECK(tri[2].p == 0.5);
}

TEST_CASE("validate rejects broken specs") {
    auto spec = default_gen_spec(Task::flow, 5, 1);
    CHECK_NOTHROW(validate(spec));
    spec.node_range = {2, 60};
    CHECK_THROWS_AS(validate(spec), Error);
    spec = default_gen_spec(Task::flow, 5, 1);
    spec.tiers.pop_back();
    CHECK_THROWS_AS(validate(spec), Error);
    spec = default_gen_spec(Task::flow, 5, 1);
    spec.tiers[0].p = 0.0;
    CHECK_THROWS_AS(validate(spec), Error);
}

TEST_CASE("generation is deterministic and independent of job count") {
    const auto spec = default_gen_spec(Task::hamilton, 30, 99);
    const auto a = generate_problems(spec, 1).problems;
    const auto b = generate_problems(spec, 4).problems;
    REQUIRE(a.size() == 30);
    REQUIRE(b.size() == 30);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == b[i].id);
        CHECK(a[i].graph == b[i].graph);
        CHECK(a[i].seed == b[i].seed);
    }
    CHECK(a[7].id == "hamilton-test-00007");
}

TEST_CASE("binary tasks alternate labels and every problem fits the budget") {
    for (Task t : kAllTasks) {
        const auto spec = default_gen_spec(t, 20, 5);
        const auto got = generate_problems(spec).problems;
        REQUIRE(got.size() == 20);
        std::set<std::string> keys;
        for (std::size_t i = 0; i < got.size(); ++i) {
            const auto& p = got[i];
            CHECK(estimate_tokens(render_problem(p)) <= spec.token_budget);
            CHECK(p.tier.band == static_cast<int>(i % 5));
            CHECK(p.tier.n == p.graph.num_nodes());
            CHECK(keys.insert(problem_key(p)).second);
            if (is_binary(t)) CHECK(p.answer.yes == (i % 2 == 0));
            CHECK(p.answer.kind != AnswerKind::unknown);
        }
    }
}

TEST_CASE("shared seen-set prevents repeats across calls") {
    auto spec = default_gen_spec(Task::triangle, 50, 3);
    spec.tiers.assign(5, TierSpec{3, 4, 0.5});
    std::unordered_set<std::string> seen;
    const auto first = generate_problems(spec, seen).problems;
    const auto second = generate_problems(spec, seen).problems;
    for (const auto& p : second) {
        for (const auto& q : first) CHECK(problem_key(p) != problem_key(q));
    }
}

TEST_CASE("an unsatisfiable spec is a stage error") {
    auto spec = default_gen_spec(Task::cycle, 40, 3);
    spec.tiers.assign(5, TierSpec{2, 2, 0.5});
    spec.max_attempts = 20;
    try {
        generate_problems(spec);
        FAIL("expected a stage error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::stage);
    }
}
