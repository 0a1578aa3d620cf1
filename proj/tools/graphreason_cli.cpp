// Command-line driver: one subcommand per pipeline stage.
#include "graphreason/error.hpp"
#include "graphreason/pipeline.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <iostream>

namespace gr = graphreason;
using ojson = nlohmann::ordered_json;

namespace {

struct Flags {
    std::string config;
    std::string tasks;
    std::size_t count = 0;
    std::uint64_t seed = 0;
    int jobs = 1;
    std::string backend;
    std::size_t cap = 0;
    std::string out;
    std::string split;
    double error_rate = 0.0;
    std::string profile;
    std::size_t shots = 0;
    std::string predictions;
    std::size_t repetitions = 1;
    std::string endpoint;
    std::string model;
    std::string api_key_env;
    std::size_t max_requests = 0;
    std::size_t token_budget = 0;
    bool no_cache = false;
    bool relax_witness = false;
};

struct Registered {
    std::map<std::string, CLI::Option*> opts;
    bool given(const std::string& name) const {
        auto it = opts.find(name);
        return it != opts.end() && it->second->count() > 0;
    }
};

Registered add_flags(CLI::App* app, Flags& f) {
    Registered r;
    r.opts["config"] = app->add_option("--config", f.config, "JSON config file; flags given on the command line win");
    r.opts["tasks"] = app->add_option("--tasks", f.tasks,
                                      "Comma-separated tasks (cycle, connect, bipartite, topology, shortest, "
                                      "triangle, flow, hamilton, subgraph) or 'all'");
    r.opts["count"] = app->add_option("--count", f.count, "Problems per task (default 3000 train, 400 test)");
    r.opts["seed"] = app->add_option("--seed", f.seed, "Master seed (default 0)");
    r.opts["jobs"] = app->add_option("--jobs", f.jobs, "Worker threads (default 1)")->check(CLI::PositiveNumber);
    r.opts["backend"] = app->add_option("--backend", f.backend, "Sampler backend (default stub)")
                            ->check(CLI::IsMember({"stub", "http"}));
    r.opts["cap"] = app->add_option("--cap", f.cap, "Reasoning paths kept per problem by select (default 5)");
    r.opts["out"] = app->add_option("--out", f.out, "Directory holding the stage files (default out)");
    r.opts["split"] = app->add_option("--split", f.split, "Split name used in problem ids (default train)");
    r.opts["error_rate"] = app->add_option("--error-rate", f.error_rate,
                                           "Stub backend: probability of a wrong conclusion (default 0)")
                               ->check(CLI::Range(0.0, 1.0));
    r.opts["profile"] = app->add_option("--profile", f.profile,
                                        "Annotate sampling profile: initial (n=3) or augmentation (n=30)")
                            ->check(CLI::IsMember({"initial", "augmentation"}));
    r.opts["shots"] = app->add_option("--shots", f.shots, "Exemplars in annotate prompts (default 2)");
    r.opts["predictions"] = app->add_option("--predictions", f.predictions,
                                            "Evaluate: grade this predictions.jsonl instead of sampling");
    r.opts["repetitions"] = app->add_option("--repetitions", f.repetitions,
                                            "Evaluate: sampled runs to average (default 1)")
                                ->check(CLI::PositiveNumber);
    r.opts["endpoint"] = app->add_option("--endpoint", f.endpoint, "HTTP backend: chat completions URL");
    r.opts["model"] = app->add_option("--model", f.model, "HTTP backend: model name (default gpt-4)");
    r.opts["api_key_env"] = app->add_option("--api-key-env", f.api_key_env,
                                            "HTTP backend: environment variable holding the API key "
                                            "(default OPENAI_API_KEY)");
    r.opts["max_requests"] = app->add_option("--max-requests", f.max_requests,
                                             "HTTP backend: request budget, 0 for unlimited");
    r.opts["token_budget"] = app->add_option("--token-budget", f.token_budget,
                                             "Generate: token limit per rendered problem (default 4096)");
    r.opts["no_cache"] = app->add_flag("--no-cache", f.no_cache, "Do not read or write the sample cache");
    r.opts["relax_witness"] = app->add_flag("--relax-witness", f.relax_witness,
                                            "Grade Hamilton and shortest-path answers on the value alone");
    return r;
}

gr::PipelineConfig build_config(const Flags& f, const Registered& r) {
    gr::PipelineConfig c;
    if (r.given("config")) c = gr::load_config(f.config);
    if (r.given("tasks")) {
        c.tasks.clear();
        if (f.tasks == "all") {
            c.tasks.assign(gr::kAllTasks.begin(), gr::kAllTasks.end());
        } else {
            std::stringstream ss(f.tasks);
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (!item.empty()) c.tasks.push_back(gr::parse_task(item));
            }
        }
    }
    if (r.given("count")) c.count = f.count;
    if (r.given("seed")) c.seed = f.seed;
    if (r.given("jobs")) c.jobs = f.jobs;
    if (r.given("backend")) c.backend = f.backend == "http" ? gr::BackendKind::http : gr::BackendKind::stub;
    if (r.given("cap")) c.cap = f.cap;
    if (r.given("out")) c.out = f.out;
    if (r.given("split")) c.split = f.split;
    if (r.given("error_rate")) c.error_rate = f.error_rate;
    if (r.given("profile")) c.annotate_profile = gr::parse_profile(f.profile);
    if (r.given("shots")) c.shots = f.shots;
    if (r.given("predictions")) c.predictions = f.predictions;
    if (r.given("repetitions")) c.repetitions = f.repetitions;
    if (r.given("endpoint")) c.http.endpoint = f.endpoint;
    if (r.given("model")) c.http.model = f.model;
    if (r.given("api_key_env")) c.http.api_key_env = f.api_key_env;
    if (r.given("max_requests")) c.http.max_requests = f.max_requests;
    if (r.given("token_budget")) c.token_budget = f.token_budget;
    if (f.no_cache) c.use_cache = false;
    if (f.relax_witness) c.grading.validate_witness = false;
    gr::validate(c);
    return c;
}

int fail(const std::string& kind, const std::string& message, int code, const ojson& extra = ojson::object()) {
    ojson j;
    j["error"] = kind;
    j["message"] = message;
    for (const auto& [k, v] : extra.items()) j[k] = v;
    std::cerr << j.dump() << std::endl;
    return code;
}

template <std::size_t N>
ojson per_task(const std::array<std::size_t, N>& values) {
    ojson j = ojson::object();
    for (gr::Task t : gr::kAllTasks) j[std::string(gr::task_name(t))] = values[gr::task_index(t)];
    return j;
}

int run(const std::string& stage, const gr::PipelineConfig& c) {
    ojson summary;
    summary["stage"] = stage;
    if (stage == "generate") {
        const auto s = gr::cmd_generate(c);
        std::cout << s.table;
        summary["problems"] = s.problems;
        std::size_t attempts = 0, rejected = 0, duplicates = 0;
        for (const auto& t : s.per_task) {
            attempts += t.attempts;
            rejected += t.rejected;
            duplicates += t.duplicates;
        }
        summary["attempts"] = attempts;
        summary["rejected"] = rejected;
        summary["duplicates"] = duplicates;
        summary["file"] = (c.out / gr::kProblemsFile).string();
    } else if (stage == "annotate") {
        const auto s = gr::cmd_annotate(c);
        summary["problems"] = s.problems;
        summary["paths"] = s.paths;
        summary["correct_paths"] = s.correct_paths;
        summary["backend_calls"] = s.backend_calls;
        summary["cache_hits"] = s.cache_hits;
        summary["file"] = (c.out / gr::kRawPathsFile).string();
    } else if (stage == "select") {
        const auto s = gr::cmd_select(c);
        std::cout << s.table;
        summary["records"] = s.records;
        summary["problems_kept"] = s.problems_kept;
        summary["problems_without_correct"] = s.problems_without_correct;
        summary["file"] = (c.out / gr::kSftFile).string();
    } else if (stage == "dpo") {
        const auto s = gr::cmd_dpo(c);
        summary["pairs"] = s.pairs;
        summary["pairs_per_task"] = per_task(s.pairs_per_task);
        summary["skipped_no_incorrect"] = s.skipped_no_incorrect;
        summary["skipped_no_correct"] = s.skipped_no_correct;
        summary["backend_calls"] = s.backend_calls;
        summary["cache_hits"] = s.cache_hits;
        summary["file"] = (c.out / gr::kDpoFile).string();
    } else if (stage == "evaluate") {
        const auto r = gr::cmd_evaluate(c);
        std::cout << gr::report_text(r);
        summary["average"] = r.average;
        summary["backend_errors"] = r.backend_errors;
        summary["file"] = (c.out / gr::kReportJson).string();
    } else if (stage == "stats") {
        std::cout << gr::cmd_stats(c);
        return 0;
    } else if (stage == "audit") {
        const auto r = gr::cmd_audit(c);
        for (const auto& f : r.findings) {
            std::cout << f.id << " " << f.field << "#" << f.path_index << " sentence " << f.violation.sentence << ": "
                      << gr::violation_kind_name(f.violation.kind) << " " << f.violation.detail << '\n';
        }
        for (const auto& g : r.grading_failures) std::cout << g << '\n';
        summary["records_checked"] = r.records_checked;
        summary["violations"] = r.findings.size();
        summary["grading_failures"] = r.grading_failures.size();
        summary["file"] = (c.out / gr::kAuditFile).string();
    }
    std::cout << summary.dump() << std::endl;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph reasoning corpus toolkit"};
    app.require_subcommand(1);
    app.footer("Environment:\n  OPENAI_API_KEY  API key for --backend http (rename with --api-key-env)\n\n"
               "Errors are printed to stderr as one JSON object; exit status is 2 for usage errors, 1 otherwise.");
    const std::vector<std::pair<std::string, std::string>> stages{
        {"generate", "Generate, solve and filter problems into problems.jsonl"},
        {"annotate", "Sample reasoning paths for each problem into raw-paths.jsonl"},
        {"select", "Keep diverse correct paths per problem into sft.jsonl"},
        {"dpo", "Sample, grade and pair preferred/dispreferred paths into dpo.jsonl"},
        {"evaluate", "Score predictions and write report.json and report.txt"},
        {"stats", "Print dataset statistics for the files in --out"},
        {"audit", "Re-grade the corpus and list reasoning steps the graph contradicts"},
    };
    Flags flags;
    std::map<std::string, Registered> registered;
    for (const auto& [name, help] : stages) {
        auto* sub = app.add_subcommand(name, help);
        registered[name] = add_flags(sub, flags);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what(), 2);
    }

    std::string stage;
    for (const auto* sub : app.get_subcommands()) stage = sub->get_name();
    try {
        const auto config = build_config(flags, registered[stage]);
        return run(stage, config);
    } catch (const gr::LineError& e) {
        return fail(std::string(gr::error_kind_name(e.kind())), e.what(), 1, {{"line", e.line()}});
    } catch (const gr::BackendError& e) {
        return fail(std::string(gr::error_kind_name(e.kind())), e.what(), 1, {{"status", e.status()}});
    } catch (const gr::Error& e) {
        return fail(std::string(gr::error_kind_name(e.kind())), e.what(), 1);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), 1);
    }
}
