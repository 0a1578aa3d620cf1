#include "graphreason/pipeline.hpp"

#include "graphreason/digest.hpp"
#include "graphreason/error.hpp"
#include "graphreason/parallel.hpp"
#include "graphreason/rng.hpp"
#include "graphreason/selector.hpp"
#include "graphreason/textgen.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace graphreason {

namespace fs = std::filesystem;

namespace {

std::vector<Task> parse_task_list(const nlohmann::json& j) {
    std::vector<std::string> names;
    if (j.is_string()) {
        std::stringstream ss(j.get<std::string>());
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) names.push_back(item);
        }
    } else {
        names = j.get<std::vector<std::string>>();
    }
    if (names.size() == 1 && names[0] == "all") return {kAllTasks.begin(), kAllTasks.end()};
    std::vector<Task> out;
    for (const auto& n : names) out.push_back(parse_task(n));
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text)) {
        throw Error(ErrorKind::io, "cannot write " + path.string());
    }
}

std::vector<Problem> load_problems(const PipelineConfig& c) {
    auto problems = read_jsonl<Problem>(c.out / kProblemsFile);
    const std::set<Task> wanted(c.tasks.begin(), c.tasks.end());
    std::erase_if(problems, [&](const Problem& p) { return !wanted.contains(p.task); });
    return problems;
}

std::unique_ptr<SampleCache> open_cache(const PipelineConfig& c) {
    // the stub is deterministic and offline; only real endpoints are cached
    if (!c.use_cache || c.backend == BackendKind::stub) return nullptr;
    return std::make_unique<SampleCache>(c.out / kCacheFile);
}

} // namespace

PipelineConfig load_config(const fs::path& path, PipelineConfig base) {
    if (!fs::exists(path)) {
        throw Error(ErrorKind::missing_dependency, "config file " + path.string() + " does not exist");
    }
    std::ifstream in(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::invalid_spec, "config " + path.string() + ": " + e.what());
    }
    if (!j.is_object()) {
        throw Error(ErrorKind::invalid_spec, "config " + path.string() + " must hold a JSON object");
    }
    PipelineConfig& c = base;
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "tasks") c.tasks = parse_task_list(v);
            else if (key == "count") c.count = v.get<std::size_t>();
            else if (key == "split") c.split = v.get<std::string>();
            else if (key == "seed") c.seed = v.get<std::uint64_t>();
            else if (key == "jobs") c.jobs = v.get<int>();
            else if (key == "token_budget") c.token_budget = v.get<std::size_t>();
            else if (key == "out") c.out = v.get<std::string>();
            else if (key == "backend") {
                const auto b = v.get<std::string>();
                if (b == "stub") c.backend = BackendKind::stub;
                else if (b == "http") c.backend = BackendKind::http;
                else throw Error(ErrorKind::invalid_spec, "unknown backend '" + b + "'");
            } else if (key == "error_rate") c.error_rate = v.get<double>();
            else if (key == "cache") c.use_cache = v.get<bool>();
            else if (key == "profile") c.annotate_profile = parse_profile(v.get<std::string>());
            else if (key == "shots") c.shots = v.get<std::size_t>();
            else if (key == "cap") c.cap = v.get<std::size_t>();
            else if (key == "predictions") c.predictions = fs::path(v.get<std::string>());
            else if (key == "repetitions") c.repetitions = v.get<std::size_t>();
            else if (key == "validate_witness") c.grading.validate_witness = v.get<bool>();
            else if (key == "http") {
                for (const auto& [hk, hv] : v.items()) {
                    if (hk == "endpoint") c.http.endpoint = hv.get<std::string>();
                    else if (hk == "model") c.http.model = hv.get<std::string>();
                    else if (hk == "api_key_env") c.http.api_key_env = hv.get<std::string>();
                    else if (hk == "max_retries") c.http.max_retries = hv.get<int>();
                    else if (hk == "max_in_flight") c.http.max_in_flight = hv.get<int>();
                    else if (hk == "max_requests") c.http.max_requests = hv.get<std::size_t>();
                    else if (hk == "timeout_seconds") c.http.timeout_seconds = hv.get<int>();
                    else throw Error(ErrorKind::invalid_spec, "unknown config key 'http." + hk + "'");
                }
            } else {
                throw Error(ErrorKind::invalid_spec, "unknown config key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::invalid_spec, "config " + path.string() + ": " + e.what());
    }
    return c;
}

void validate(const PipelineConfig& c) {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::invalid_spec, msg); };
    if (c.tasks.empty()) fail("no tasks selected");
    if (c.count && *c.count == 0) fail("count must be positive");
    if (c.jobs < 1) fail("jobs must be at least 1");
    if (c.split.empty() || c.split.find_first_of(" \t\n/") != std::string::npos) fail("split must be a plain word");
    if (!(c.error_rate >= 0.0 && c.error_rate <= 1.0)) fail("error rate must lie in [0, 1]");
    if (c.cap == 0) fail("cap must be positive");
    if (c.repetitions == 0) fail("repetitions must be positive");
    if (c.token_budget < 256) fail("token budget below 256 tokens");
    if (c.out.empty()) fail("output directory is empty");
}

std::size_t problems_per_task(const PipelineConfig& c) {
    if (c.count) return *c.count;
    return c.split == "test" ? 400 : 3000;
}

std::unique_ptr<Backend> make_backend(const PipelineConfig& c) {
    if (c.backend == BackendKind::stub) {
        return std::make_unique<StubBackend>(StubOptions{derive_seed(c.seed, {0x57b}), c.error_rate, true});
    }
    if (!std::getenv(c.http.api_key_env.c_str())) {
        throw Error(ErrorKind::invalid_spec, "environment variable " + c.http.api_key_env + " is not set");
    }
    return std::make_unique<HttpBackend>(c.http);
}

GenerateSummary cmd_generate(const PipelineConfig& c) {
    validate(c);
    std::vector<Task> tasks = c.tasks;
    std::sort(tasks.begin(), tasks.end());
    tasks.erase(std::unique(tasks.begin(), tasks.end()), tasks.end());

    GenerateSummary summary;
    std::vector<Problem> all;
    for (Task t : tasks) {
        const std::uint64_t split_word = std::stoull(sha256_hex(c.split).substr(0, 16), nullptr, 16);
        GenSpec spec = default_gen_spec(t, problems_per_task(c), derive_seed(c.seed, {task_index(t), split_word}));
        spec.split = c.split;
        if (c.token_budget != spec.token_budget) {
            spec.token_budget = c.token_budget;
            spec.tiers = default_tiers(t, c.token_budget);
        }
        validate(spec);
        auto result = generate_problems(spec, c.jobs);
        summary.per_task[task_index(t)] = result.stats;
        std::move(result.problems.begin(), result.problems.end(), std::back_inserter(all));
    }
    write_jsonl(c.out / kProblemsFile, all);
    summary.problems = all.size();
    summary.table = render_stats_table(compute_stats(all));
    return summary;
}

AnnotateSummary cmd_annotate(const PipelineConfig& c) {
    validate(c);
    const auto problems = load_problems(c);
    auto backend = make_backend(c);
    auto cache = open_cache(c);
    Sampler sampler(*backend, cache.get());

    std::vector<RawPaths> raw(problems.size());
    parallel_for(problems.size(), c.jobs, [&](std::size_t i) {
        const Problem& p = problems[i];
        const auto req = make_request(c.annotate_profile, build_cot_prompt(p.task, p, c.shots));
        RawPaths& r = raw[i];
        r.id = p.id;
        r.task = p.task;
        r.profile = std::string(profile_name(c.annotate_profile));
        r.outputs = sampler.sample(req, r.profile);
        for (const auto& o : r.outputs) r.correct.push_back(grade(p, o, c.grading).correct);
    });
    write_jsonl(c.out / kRawPathsFile, raw);

    AnnotateSummary s;
    s.problems = raw.size();
    for (const auto& r : raw) {
        s.paths += r.outputs.size();
        s.correct_paths += static_cast<std::size_t>(std::count(r.correct.begin(), r.correct.end(), true));
    }
    s.backend_calls = sampler.backend_calls();
    s.cache_hits = sampler.cache_hits();
    return s;
}

SelectSummary cmd_select(const PipelineConfig& c) {
    validate(c);
    const auto problems = load_problems(c);
    const auto raw = read_jsonl<RawPaths>(c.out / kRawPathsFile);
    std::map<std::string, const RawPaths*> by_id;
    for (const auto& r : raw) by_id[r.id] = &r;

    std::vector<std::vector<std::string>> texts(problems.size());
    std::vector<std::vector<std::vector<std::string>>> strategies(problems.size());
    parallel_for(problems.size(), c.jobs, [&](std::size_t i) {
        const Problem& p = problems[i];
        auto it = by_id.find(p.id);
        if (it == by_id.end()) return;
        std::vector<std::string> correct;
        for (const auto& o : it->second->outputs) {
            if (grade(p, o, c.grading).correct) correct.push_back(o);
        }
        if (correct.empty()) return;
        HashingEmbedder local;
        const auto sel = select_diverse(correct, c.cap, &local, derive_seed(c.seed, {i}));
        for (std::size_t idx : sel.chosen) {
            texts[i].push_back(correct[idx]);
            std::vector<std::string> why;
            if (idx == sel.anchor) why.emplace_back("anchor");
            for (const auto& [name, nominated] : sel.nominations) {
                if (std::find(nominated.begin(), nominated.end(), idx) != nominated.end()) why.push_back(name);
            }
            strategies[i].push_back(std::move(why));
        }
    });

    std::map<std::string, std::vector<std::string>> paths;
    std::map<std::string, std::vector<std::vector<std::string>>> strat;
    SelectSummary s;
    for (std::size_t i = 0; i < problems.size(); ++i) {
        if (texts[i].empty()) {
            if (by_id.contains(problems[i].id)) ++s.problems_without_correct;
            continue;
        }
        paths[problems[i].id] = std::move(texts[i]);
        strat[problems[i].id] = std::move(strategies[i]);
    }
    const auto records = assemble_sft(problems, paths, strat, c.grading);
    write_jsonl(c.out / kSftFile, records);
    s.records = records.size();
    s.problems_kept = paths.size();
    s.table = render_stats_table(compute_stats(records));
    return s;
}

DpoSummary cmd_dpo(const PipelineConfig& c) {
    validate(c);
    const auto problems = load_problems(c);
    auto backend = make_backend(c);
    auto cache = open_cache(c);
    Sampler sampler(*backend, cache.get());

    std::vector<std::optional<DpoCandidate>> candidates(problems.size());
    std::vector<DpoAssembly> skips(problems.size());
    std::vector<char> had_incorrect(problems.size(), 0);
    parallel_for(problems.size(), c.jobs, [&](std::size_t i) {
        const Problem& p = problems[i];
        const auto samples = sampler.sample(make_request(Profile::dpo, wrap_instruction(render_problem(p))),
                                            profile_name(Profile::dpo));
        HashingEmbedder embedder;
        candidates[i] = build_dpo_candidate(p, samples, &embedder, skips[i], c.grading);
        had_incorrect[i] = candidates[i].has_value() || skips[i].skipped_no_correct > 0;
    });

    DpoSummary s;
    std::vector<DpoCandidate> pairs;
    for (std::size_t i = 0; i < problems.size(); ++i) {
        const std::size_t t = task_index(problems[i].task);
        if (had_incorrect[i]) ++s.with_incorrect[t];
        if (candidates[i]) {
            pairs.push_back(std::move(*candidates[i]));
            ++s.pairs_per_task[t];
        }
        s.skipped_no_incorrect += skips[i].skipped_no_incorrect;
        s.skipped_no_correct += skips[i].skipped_no_correct;
        for (auto& id : skips[i].skipped_ids) s.skipped_ids.push_back(std::move(id));
    }
    const auto records = assemble_dpo(problems, pairs, c.grading);
    write_jsonl(c.out / kDpoFile, records);
    s.pairs = records.size();
    s.backend_calls = sampler.backend_calls();
    s.cache_hits = sampler.cache_hits();
    return s;
}

EvalReport cmd_evaluate(const PipelineConfig& c) {
    validate(c);
    const auto problems = load_problems(c);
    EvalReport report;
    if (c.predictions) {
        report = evaluate(problems, read_jsonl<Prediction>(*c.predictions), c.grading, c.jobs);
    } else {
        auto backend = make_backend(c);
        auto cache = open_cache(c);
        auto run = run_eval(problems, *backend, c.repetitions, cache.get(), c.jobs, c.grading);
        write_jsonl(c.out / kPredictionsFile, run.predictions);
        report = run.report;
    }
    write_text(c.out / kReportJson, report_json(report));
    write_text(c.out / kReportText, report_text(report));
    return report;
}

std::string cmd_stats(const PipelineConfig& c) {
    std::string out;
    bool any = false;
    if (fs::exists(c.out / kProblemsFile)) {
        out += "problems (" + (c.out / kProblemsFile).string() + ")\n" +
               render_stats_table(compute_stats(read_jsonl<Problem>(c.out / kProblemsFile)));
        any = true;
    }
    if (fs::exists(c.out / kSftFile)) {
        out += std::string(any ? "\n" : "") + "sft (" + (c.out / kSftFile).string() + ")\n" +
               render_stats_table(compute_stats(read_jsonl<SftRecord>(c.out / kSftFile)));
        any = true;
    }
    if (fs::exists(c.out / kDpoFile)) {
        out += std::string(any ? "\n" : "") + "dpo (" + (c.out / kDpoFile).string() + ")\n" +
               render_stats_table(compute_stats(read_jsonl<DpoRecord>(c.out / kDpoFile)));
        any = true;
    }
    if (!any) {
        throw Error(ErrorKind::missing_dependency, "no problems.jsonl, sft.jsonl or dpo.jsonl in " + c.out.string());
    }
    return out;
}

AuditReport cmd_audit(const PipelineConfig& c) {
    const auto problems = read_jsonl<Problem>(c.out / kProblemsFile);
    const bool have_sft = fs::exists(c.out / kSftFile);
    const bool have_dpo = fs::exists(c.out / kDpoFile);
    if (!have_sft && !have_dpo) {
        throw Error(ErrorKind::missing_dependency, (c.out / kSftFile).string() + " does not exist");
    }
    const auto sft = have_sft ? read_jsonl<SftRecord>(c.out / kSftFile) : std::vector<SftRecord>{};
    const auto dpo = have_dpo ? read_jsonl<DpoRecord>(c.out / kDpoFile) : std::vector<DpoRecord>{};
    auto report = audit_corpus(problems, sft, dpo, c.grading);

    nlohmann::ordered_json j;
    j["records_checked"] = report.records_checked;
    j["grading_failures"] = report.grading_failures;
    auto findings = nlohmann::ordered_json::array();
    for (const auto& f : report.findings) {
        findings.push_back({{"id", f.id},
                            {"field", f.field},
                            {"path_index", f.path_index},
                            {"sentence", f.violation.sentence},
                            {"kind", violation_kind_name(f.violation.kind)},
                            {"detail", f.violation.detail}});
    }
    j["findings"] = std::move(findings);
    write_text(c.out / kAuditFile, j.dump(2) + "\n");
    return report;
}

} // namespace graphreason
