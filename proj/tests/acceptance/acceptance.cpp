// Runs the eight acceptance checks and prints one PASS/FAIL line each.
// Exit status is the number of failed checks.
#include "graphreason/corpus.hpp"
#include "graphreason/error.hpp"
#include "graphreason/eval.hpp"
#include "graphreason/generate.hpp"
#include "graphreason/grader.hpp"
#include "graphreason/parallel.hpp"
#include "graphreason/pipeline.hpp"
#include "graphreason/rng.hpp"
#include "graphreason/selector.hpp"
#include "graphreason/solvers.hpp"
#include "graphreason/textgen.hpp"
#include "graphreason/transcript.hpp"

#include "../oracle/oracle.hpp"
#include "../oracle/selection.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <span>
#include <thread>
#include <unordered_set>

using namespace graphreason;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Check {
public:
    void require(bool ok, const std::string& msg) {
        if (!ok && failures_++ < 5) notes_ += (notes_.empty() ? "" : "; ") + msg;
    }
    Outcome done(const std::string& summary) const {
        if (failures_ == 0) return {true, summary};
        return {false, std::to_string(failures_) + " failure(s): " + notes_};
    }

private:
    std::size_t failures_ = 0;
    std::string notes_;
};

int jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("graphreason-acceptance-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1 -------------------------------------------------------------------------
Outcome solver_oracle_equivalence() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    constexpr std::size_t kPerTask = 200;
    std::size_t total = 0;
    for (Task t : kAllTasks) {
        std::vector<std::string> errors(kPerTask);
        parallel_for(kPerTask, jobs(), [&](std::size_t i) {
            const auto in = oracle::random_instance(t, derive_seed(0xacce, {task_index(t), i}), oracle::node_limit(t));
            std::string why;
            const Answer got = solve(t, in.graph, in.query);
            if (!oracle::agrees(t, in.graph, in.query, got, &why)) errors[i] = why;
        });
        for (std::size_t i = 0; i < kPerTask; ++i) {
            c.require(errors[i].empty(), std::string(task_name(t)) + " #" + std::to_string(i) + ": " + errors[i]);
        }
        total += kPerTask;
    }
    const double secs = seconds_since(t0);
    c.require(secs < 300.0, "took " + std::to_string(secs) + " s");
    char buf[128];
    std::snprintf(buf, sizeof buf, "%zu instances over 9 tasks agree with brute force (%.1f s)", total, secs);
    return c.done(buf);
}

// 2 -------------------------------------------------------------------------
Outcome worked_examples() {
    Check c;
    struct Expect {
        Task task;
        std::vector<std::string> values;
    };
    const std::vector<Expect> expected{
        {Task::connect, {"No", "Yes"}},   {Task::shortest, {"8", "4"}}, {Task::flow, {"10", "8"}},
        {Task::triangle, {"21", "16"}},   {Task::hamilton, {"Yes", "Yes"}}, {Task::subgraph, {"Yes", "No"}},
    };
    std::size_t checked = 0;
    for (const auto& e : expected) {
        const auto& tmpl = default_template(e.task);
        c.require(tmpl.exemplars.size() == e.values.size(), std::string(task_name(e.task)) + ": exemplar count");
        for (std::size_t i = 0; i < std::min(tmpl.exemplars.size(), e.values.size()); ++i) {
            const std::string label = std::string(task_name(e.task)) + " example " + std::to_string(i + 1);
            const auto parsed = parse_problem(tmpl.exemplars[i].question);
            const Answer got = solve(parsed.task, parsed.graph, parsed.query);
            c.require(describe(got) == e.values[i], label + ": solver says " + describe(got) + ", expected " + e.values[i]);
            const auto stated = extract_answer(tmpl.exemplars[i].answer, e.task);
            c.require(stated && describe(*stated) == e.values[i], label + ": worked answer does not state " + e.values[i]);
            if (e.task == Task::hamilton) {
                c.require(is_hamilton_path(parsed.graph, got.witness.nodes), label + ": solver witness invalid");
                // the first worked answer lists [0,1,4,5,3,2], which needs the absent edge (2,3)
                const bool stated_valid = stated && is_hamilton_path(parsed.graph, stated->sequence);
                c.require(stated_valid == (i == 1), label + ": stated path validity");
            }
            ++checked;
        }
    }
    return c.done(std::to_string(checked) +
                  " worked examples reproduce; Hamilton witnesses from the solver are valid (the first printed path "
                  "uses a missing edge and is rejected)");
}

// 3 -------------------------------------------------------------------------
Outcome default_test_generation() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    PipelineConfig cfg;
    cfg.split = "test";
    cfg.seed = 2024;
    cfg.jobs = jobs();
    cfg.out = scratch("generate");
    cmd_generate(cfg);
    const auto problems = read_jsonl<Problem>(cfg.out / kProblemsFile);
    const double secs = seconds_since(t0);

    c.require(problems.size() == 3600, "total " + std::to_string(problems.size()));
    std::array<std::size_t, 9> count{}, yes{};
    std::set<std::pair<Task, std::string>> keys;
    std::size_t dup = 0;
    for (const auto& p : problems) {
        const auto r = task_node_range(p.task);
        c.require(p.graph.num_nodes() >= r.min && p.graph.num_nodes() <= r.max,
                  p.id + ": " + std::to_string(p.graph.num_nodes()) + " nodes");
        ++count[task_index(p.task)];
        if (p.answer.kind == AnswerKind::yes_no && p.answer.yes) ++yes[task_index(p.task)];
        if (!keys.emplace(p.task, problem_key(p)).second) ++dup;
    }
    c.require(dup == 0, std::to_string(dup) + " duplicate keys");
    for (Task t : kAllTasks) {
        c.require(count[task_index(t)] == 400, std::string(task_name(t)) + " has " + std::to_string(count[task_index(t)]));
        if (is_binary(t)) {
            const double frac = static_cast<double>(yes[task_index(t)]) / 400.0;
            c.require(std::abs(frac - 0.5) <= 0.02, std::string(task_name(t)) + " yes fraction " + std::to_string(frac));
        }
    }
    c.require(secs < 600.0, "took " + std::to_string(secs) + " s");
    fs::remove_all(cfg.out);
    char buf[160];
    std::snprintf(buf, sizeof buf, "3600 problems, 400 per task, ranges/balance/uniqueness hold (%.1f s)", secs);
    return c.done(buf);
}

// 4 -------------------------------------------------------------------------
Outcome dpo_loss_math() {
    Check c;
    Rng rng(44);
    double worst_ln2 = 0, worst_grad = 0;
    for (int i = 0; i < 100; ++i) {
        const double beta = 0.01 + rng.unit() * 2.0;
        const double a = -200.0 * rng.unit(), b = -200.0 * rng.unit();
        worst_ln2 = std::max(worst_ln2, std::abs(dpo_loss(beta, a, b, a, b) - std::log(2.0)));
    }
    c.require(worst_ln2 <= 1e-12, "ln 2 deviation " + std::to_string(worst_ln2));

    for (int i = 0; i < 100; ++i) {
        const double beta = 0.05 + rng.unit();
        double x[4];
        for (double& v : x) v = -20.0 * rng.unit();
        const auto g = dpo_loss_gradient(beta, x[0], x[1], x[2], x[3]);
        const double analytic[4] = {g.policy_w, g.policy_l, g.ref_w, g.ref_l};
        for (int k = 0; k < 4; ++k) {
            const double h = 1e-5;
            double up[4], dn[4];
            std::copy(x, x + 4, up);
            std::copy(x, x + 4, dn);
            up[k] += h;
            dn[k] -= h;
            const double fd = (dpo_loss(beta, up[0], up[1], up[2], up[3]) - dpo_loss(beta, dn[0], dn[1], dn[2], dn[3])) / (2 * h);
            const double rel = std::abs(fd - analytic[k]) / std::max(std::abs(analytic[k]), 1e-6);
            worst_grad = std::max(worst_grad, rel);
        }
    }
    c.require(worst_grad <= 1e-6, "gradient relative error " + std::to_string(worst_grad));

    double prev = INFINITY;
    bool monotone = true;
    for (int i = 0; i < 100; ++i) {
        const double margin = -10.0 + 20.0 * i / 99.0;
        const double l = dpo_loss(kDefaultBeta, margin, 0.0, 0.0, 0.0);
        if (!(l < prev)) monotone = false;
        prev = l;
    }
    c.require(monotone, "loss not strictly decreasing over the margin sweep");
    char buf[160];
    std::snprintf(buf, sizeof buf, "ln2 error %.1e, gradient rel. error %.1e, 100-point sweep monotone", worst_ln2, worst_grad);
    return c.done(buf);
}

// 5 -------------------------------------------------------------------------
std::vector<std::string> synthetic_paths(Rng& rng) {
    static const std::vector<std::string> vocab{
        "node", "edge", "path", "cycle", "visit", "from", "to", "the", "graph", "we", "so", "answer", "is",
        "yes", "no", "weight", "sum", "flow", "capacity", "set", "color", "order", "start", "reach", "back",
        "0", "1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "11", "12"};
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 12));
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (!out.empty() && rng.bernoulli(0.2)) {
            // near copy of an earlier path
            auto base = out[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(out.size()) - 1))];
            base += " " + vocab[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(vocab.size()) - 1))];
            out.push_back(base);
            continue;
        }
        if (!out.empty() && rng.bernoulli(0.1)) {
            out.push_back(out.back());
            continue;
        }
        std::string s;
        const auto len = rng.uniform_int(3, 30);
        for (std::int64_t k = 0; k < len; ++k) {
            if (k) s += rng.bernoulli(0.15) ? ", " : " ";
            s += vocab[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(vocab.size()) - 1))];
        }
        if (rng.bernoulli(0.3)) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
        out.push_back(s + ".");
    }
    return out;
}

bool in(const std::vector<std::size_t>& v, std::size_t x) { return std::find(v.begin(), v.end(), x) != v.end(); }

Outcome selection() {
    Check c;
    Rng rng(55);
    HashingEmbedder embedder;
    std::size_t nominations = 0;
    for (int set = 0; set < 50; ++set) {
        const auto paths = synthetic_paths(rng);
        const std::string tag = "set " + std::to_string(set);

        // select_diverse against brute force over the distinct texts
        std::vector<std::string> uniq;
        std::vector<std::size_t> origin;
        for (std::size_t i = 0; i < paths.size(); ++i) {
            if (std::find(uniq.begin(), uniq.end(), paths[i]) == uniq.end()) {
                uniq.push_back(paths[i]);
                origin.push_back(i);
            }
        }
        std::size_t anchor = 0;
        for (std::size_t i = 1; i < uniq.size(); ++i) {
            if (uniq[i].size() > uniq[anchor].size() || (uniq[i].size() == uniq[anchor].size() && uniq[i] < uniq[anchor])) anchor = i;
        }
        const auto sel = select_diverse(paths, 100, &embedder, 7);
        const auto again = select_diverse(paths, 100, &embedder, 7);
        c.require(sel.chosen == again.chosen && sel.nominations == again.nominations, tag + ": not deterministic");
        c.require(sel.anchor == origin[anchor], tag + ": anchor");
        const auto emb = embedder.embed(uniq);
        const auto sims = oracle::all_pairs(uniq, &emb);
        if (uniq.size() >= 2) {
            for (const auto& [metric, m] : sims) {
                const auto ties = oracle::extreme_set(m, anchor, true);
                std::size_t expect = ties.front();
                for (auto j : ties) if (uniq[j] < uniq[expect]) expect = j;
                auto it = sel.nominations.find(metric);
                if (it == sel.nominations.end() || it->second.size() != 1) {
                    c.require(false, tag + ": no " + metric + " nomination");
                    continue;
                }
                const auto got = std::find(origin.begin(), origin.end(), it->second.front()) - origin.begin();
                const bool ok = ties.size() == 1 ? static_cast<std::size_t>(got) == expect : in(ties, static_cast<std::size_t>(got));
                c.require(ok, tag + ": " + metric + " argmin");
                ++nominations;
            }
        }

        // select_dispreferred: the first path acts as the anchor, the rest are incorrect
        if (paths.size() < 2) continue;
        const std::string anchor_text = paths.front() + " anchor";
        const std::vector<std::string> wrong(paths.begin() + 1, paths.end());
        std::vector<std::string> texts = wrong;
        texts.push_back(anchor_text);
        const auto emb2 = embedder.embed(texts);
        const auto sims2 = oracle::all_pairs(texts, &emb2);
        const auto pick = select_dispreferred(anchor_text, wrong, &embedder);
        const auto pick2 = select_dispreferred(anchor_text, wrong, &embedder);
        c.require(pick && pick2 && pick->index == pick2->index && pick->votes == pick2->votes, tag + ": dispreferred not deterministic");
        if (!pick) continue;
        auto better = [&](std::size_t i, std::size_t j) {
            if (wrong[i].size() != wrong[j].size()) return wrong[i].size() > wrong[j].size();
            if (wrong[i] != wrong[j]) return wrong[i] < wrong[j];
            return i < j;
        };
        std::vector<std::size_t> votes(wrong.size(), 0);
        for (const auto& [metric, m] : sims2) {
            const auto ties = oracle::extreme_set(m, texts.size() - 1, false);
            std::size_t expect = ties.front();
            for (auto j : ties) if (better(j, expect)) expect = j;
            auto it = pick->votes.find(metric);
            const bool ok = it != pick->votes.end() &&
                            (ties.size() == 1 ? it->second == expect : in(ties, it->second));
            c.require(ok, tag + ": " + metric + " argmax");
            if (it != pick->votes.end()) ++votes[it->second];
            ++nominations;
        }
        std::size_t winner = 0;
        for (std::size_t j = 1; j < wrong.size(); ++j) {
            if (votes[j] > votes[winner] || (votes[j] == votes[winner] && better(j, winner))) winner = j;
        }
        c.require(pick->index == winner, tag + ": majority vote");
    }
    return c.done("50 synthetic sets, " + std::to_string(nominations) + " nominations match brute force; reruns identical");
}

// 6 -------------------------------------------------------------------------
Outcome offline_pipeline() {
    Check c;
    PipelineConfig cfg;
    cfg.count = 10;
    cfg.seed = 6;
    cfg.jobs = jobs();
    cfg.error_rate = 0.4;
    cfg.out = scratch("pipeline");
    cmd_generate(cfg);
    const auto ann = cmd_annotate(cfg);
    const auto sel = cmd_select(cfg);
    const auto dpo = cmd_dpo(cfg);
    const auto report = cmd_evaluate(cfg);
    for (const char* f : {kProblemsFile, kRawPathsFile, kSftFile, kDpoFile, kReportJson, kReportText}) {
        c.require(fs::exists(cfg.out / f), std::string(f) + " missing");
    }
    c.require(ann.problems == 90, "annotated " + std::to_string(ann.problems));
    c.require(sel.records > 0, "no SFT records");
    c.require(report.runs == 1, "report");
    std::size_t tasks_with_errors = 0;
    for (Task t : kAllTasks) {
        const auto i = task_index(t);
        if (dpo.with_incorrect[i] > 0) {
            ++tasks_with_errors;
            c.require(dpo.pairs_per_task[i] >= 1, std::string(task_name(t)) + ": incorrect samples but no DPO pair");
        }
    }

    const auto problems = read_jsonl<Problem>(cfg.out / kProblemsFile);
    std::vector<Prediction> truth, flipped;
    for (const auto& p : problems) {
        truth.push_back({p.id, synthesize_transcript(p, true, p.seed)});
        if (is_binary(p.task)) flipped.push_back({p.id, synthesize_transcript(p, false, p.seed)});
    }
    const auto r_truth = evaluate(problems, truth);
    const auto r_flip = evaluate(problems, flipped);
    for (Task t : kAllTasks) {
        const auto i = task_index(t);
        c.require(r_truth.per_task[i].accuracy == 1.0, std::string(task_name(t)) + " ground truth " + std::to_string(r_truth.per_task[i].accuracy));
        if (is_binary(t)) {
            c.require(r_flip.per_task[i].accuracy == 0.0, std::string(task_name(t)) + " flipped " + std::to_string(r_flip.per_task[i].accuracy));
        }
    }
    fs::remove_all(cfg.out);
    return c.done("90 problems, " + std::to_string(sel.records) + " SFT records, " + std::to_string(dpo.pairs) +
                  " DPO pairs covering all " + std::to_string(tasks_with_errors) +
                  " tasks with errors; ground truth 100%, flipped binary 0%");
}

// 7 -------------------------------------------------------------------------
Outcome render_parse_round_trip() {
    Check c;
    std::vector<Problem> problems;
    for (Task t : kAllTasks) {
        auto spec = default_gen_spec(t, 112, derive_seed(77, {task_index(t)}));
        auto got = generate_problems(spec, jobs()).problems;
        std::move(got.begin(), got.end(), std::back_inserter(problems));
    }
    problems.resize(std::min<std::size_t>(problems.size(), 1000));
    c.require(problems.size() == 1000, "only " + std::to_string(problems.size()) + " problems");
    for (const auto& p : problems) {
        try {
            const auto parsed = parse_problem(render_problem(p));
            c.require(parsed.task == p.task && parsed.graph == p.graph && parsed.query == p.query, p.id + ": parse(render) differs");
        } catch (const Error& e) {
            c.require(false, p.id + ": " + e.what());
        }
    }
    const auto dir = scratch("jsonl");
    write_jsonl(dir / "p.jsonl", problems);
    const auto back = read_jsonl<Problem>(dir / "p.jsonl");
    c.require(back.size() == problems.size(), "JSONL length");
    for (std::size_t i = 0; i < std::min(back.size(), problems.size()); ++i) {
        const auto& a = problems[i];
        const auto& b = back[i];
        c.require(a.id == b.id && a.task == b.task && a.graph == b.graph && a.query == b.query && a.answer == b.answer &&
                      a.tier == b.tier && a.seed == b.seed && to_json_line(a) == to_json_line(b),
                  a.id + ": JSONL round trip differs");
    }
    fs::remove_all(dir);
    return c.done("1000 problems survive parse(render(p)) and the JSONL round trip");
}

// 8 -------------------------------------------------------------------------
Outcome topological_grading() {
    Check c;
    Rng rng(88);
    std::size_t graded = 0;
    for (int k = 0; k < 100; ++k) {
        const int n = static_cast<int>(rng.uniform_int(2, 7));
        std::vector<NodeId> rank(n);
        std::iota(rank.begin(), rank.end(), 0);
        rng.shuffle(std::span<NodeId>(rank));
        Graph g(n, true);
        const double p = 0.15 + 0.6 * rng.unit();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.bernoulli(p)) g.add_edge(rank[i], rank[j]);
        Problem prob;
        prob.id = "dag-" + std::to_string(k);
        prob.task = Task::topology;
        prob.graph = g;
        prob.answer = solve(Task::topology, g, {});
        const auto valid = oracle::topological_orders(g);
        const std::set<std::vector<NodeId>> valid_set(valid.begin(), valid.end());
        std::vector<NodeId> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            std::string text = "Following the edges gives " + std::to_string(n) + " nodes in order. ### [";
            for (int i = 0; i < n; ++i) text += (i ? ", " : "") + std::to_string(perm[i]);
            text += "]";
            const bool correct = grade(prob, text).correct;
            c.require(correct == valid_set.contains(perm), prob.id + ": grading disagrees with the valid-order set");
            ++graded;
        } while (std::next_permutation(perm.begin(), perm.end()));
        c.require(!grade(prob, "### None.").correct, prob.id + ": None accepted for a DAG");
    }
    return c.done("100 DAGs, " + std::to_string(graded) + " candidate orders graded exactly as brute force");
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"solver-oracle equivalence", solver_oracle_equivalence},
        {"worked examples", worked_examples},
        {"default test generation", default_test_generation},
        {"DPO loss math", dpo_loss_math},
        {"selection determinism and correctness", selection},
        {"offline pipeline", offline_pipeline},
        {"render/parse and JSONL round trip", render_parse_round_trip},
        {"topological grading", topological_grading},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": " << o.detail
                  << std::endl;
    }
    return failed;
}
