#include "graphreason/corpus.hpp"

#include "graphreason/error.hpp"
#include "graphreason/textgen.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace graphreason {

using json = nlohmann::ordered_json;

namespace {

json graph_to_json(const Graph& g) {
    json edges = json::array();
    for (const auto& e : g.edges()) {
        json t = json::array({e.u, e.v});
        if (e.weight) t.push_back(*e.weight);
        edges.push_back(std::move(t));
    }
    json j;
    j["num_nodes"] = g.num_nodes();
    j["directed"] = g.directed();
    j["edges"] = std::move(edges);
    if (g.node_weights()) j["node_weights"] = *g.node_weights();
    return j;
}

Graph graph_from_json(const json& j) {
    Graph g(j.at("num_nodes").get<int>(), j.at("directed").get<bool>());
    for (const auto& t : j.at("edges")) {
        if (!t.is_array() || t.size() < 2 || t.size() > 3) {
            throw Error(ErrorKind::io, "edge must be [u, v] or [u, v, w]");
        }
        std::optional<int> w;
        if (t.size() == 3) w = t[2].get<int>();
        if (!g.add_edge(t[0].get<int>(), t[1].get<int>(), w)) {
            throw Error(ErrorKind::io, "duplicate edge in graph");
        }
    }
    if (j.contains("node_weights")) g.set_node_weights(j["node_weights"].get<std::vector<int>>());
    return g;
}

json query_to_json(Task task, const Query& q) {
    json j = json::object();
    const bool flow = task == Task::flow;
    if (q.u) j[flow ? "s" : "u"] = *q.u;
    if (q.v) j[flow ? "t" : "v"] = *q.v;
    if (q.pattern) j["pattern"] = graph_to_json(*q.pattern);
    return j;
}

Query query_from_json(const json& j) {
    Query q;
    for (const char* k : {"u", "s"}) {
        if (j.contains(k)) q.u = j[k].get<NodeId>();
    }
    for (const char* k : {"v", "t"}) {
        if (j.contains(k)) q.v = j[k].get<NodeId>();
    }
    if (j.contains("pattern")) q.pattern = graph_from_json(j["pattern"]);
    return q;
}

json answer_to_json(const Answer& a) {
    json j;
    j["kind"] = answer_kind_name(a.kind);
    switch (a.kind) {
    case AnswerKind::yes_no: j["value"] = a.yes; break;
    case AnswerKind::numeric: j["value"] = a.number; break;
    case AnswerKind::node_sequence: j["value"] = a.sequence; break;
    case AnswerKind::none_exists:
    case AnswerKind::unknown: j["value"] = nullptr; break;
    }
    if (a.kind != AnswerKind::node_sequence && !a.sequence.empty()) j["sequence"] = a.sequence;
    if (a.witness.kind != WitnessKind::none) {
        j["witness"] = {{"kind", witness_kind_name(a.witness.kind)}, {"nodes", a.witness.nodes}};
    }
    return j;
}

Answer answer_from_json(const json& j) {
    Answer a;
    a.kind = parse_answer_kind(j.at("kind").get<std::string>());
    switch (a.kind) {
    case AnswerKind::yes_no: a.yes = j.at("value").get<bool>(); break;
    case AnswerKind::numeric: a.number = j.at("value").get<std::int64_t>(); break;
    case AnswerKind::node_sequence: a.sequence = j.at("value").get<std::vector<NodeId>>(); break;
    default: break;
    }
    if (j.contains("sequence")) a.sequence = j["sequence"].get<std::vector<NodeId>>();
    if (j.contains("witness")) {
        a.witness.kind = parse_witness_kind(j["witness"].at("kind").get<std::string>());
        a.witness.nodes = j["witness"].at("nodes").get<std::vector<NodeId>>();
    }
    return a;
}

json meta_to_json(const RecordMeta& m) {
    json j;
    j["n"] = m.n;
    j["p"] = m.p;
    j["seed"] = m.seed;
    j["tier"] = m.band;
    j["difficulty"] = difficulty_name(m.difficulty);
    return j;
}

RecordMeta meta_from_json(const json& j) {
    RecordMeta m;
    m.n = j.at("n").get<int>();
    m.p = j.at("p").get<double>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.band = j.at("tier").get<int>();
    m.difficulty = parse_difficulty(j.at("difficulty").get<std::string>());
    return m;
}

json parse_line(std::string_view line) {
    try {
        auto j = json::parse(line);
        if (!j.is_object()) throw Error(ErrorKind::io, "expected a JSON object");
        return j;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::io, std::string("malformed JSON: ") + e.what());
    }
}

template <typename F>
auto guarded(F f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::io, std::string("schema mismatch: ") + e.what());
    }
}

std::map<std::string, const Problem*> index_problems(const std::vector<Problem>& problems) {
    std::map<std::string, const Problem*> out;
    for (const auto& p : problems) {
        if (!out.emplace(p.id, &p).second) {
            throw Error(ErrorKind::assembly, "duplicate problem id '" + p.id + "'");
        }
    }
    return out;
}

auto record_order = [](const auto& a, const auto& b) {
    return std::tuple(task_index(a.task), a.id) < std::tuple(task_index(b.task), b.id);
};

} // namespace

RecordMeta meta_of(const Problem& p) { return {p.tier.n, p.tier.p, p.seed, p.tier.band, p.tier.difficulty}; }

std::string to_json_line(const Problem& p) {
    json j;
    j["id"] = p.id;
    j["task"] = task_name(p.task);
    j["graph"] = graph_to_json(p.graph);
    j["query"] = query_to_json(p.task, p.query);
    j["answer"] = answer_to_json(p.answer);
    j["tier"] = {{"n", p.tier.n}, {"p", p.tier.p}, {"difficulty", difficulty_name(p.tier.difficulty)},
                 {"band", p.tier.band}};
    j["seed"] = p.seed;
    j["text"] = render_problem(p);
    j["schema_version"] = kSchemaVersion;
    return j.dump();
}

std::string to_json_line(const RawPaths& r) {
    json j;
    j["id"] = r.id;
    j["task"] = task_name(r.task);
    j["profile"] = r.profile;
    json paths = json::array();
    for (std::size_t i = 0; i < r.outputs.size(); ++i) {
        paths.push_back({{"output", r.outputs[i]}, {"correct", i < r.correct.size() && r.correct[i]}});
    }
    j["paths"] = std::move(paths);
    j["schema_version"] = kSchemaVersion;
    return j.dump();
}

std::string to_json_line(const SftRecord& r) {
    json j;
    j["id"] = r.id;
    j["task"] = task_name(r.task);
    j["instruction"] = r.instruction;
    j["output"] = r.output;
    json meta = meta_to_json(r.meta);
    meta["path_index"] = r.path_index;
    meta["strategies"] = r.strategies;
    meta["schema_version"] = kSchemaVersion;
    j["meta"] = std::move(meta);
    return j.dump();
}

std::string to_json_line(const DpoRecord& r) {
    json j;
    j["id"] = r.id;
    j["task"] = task_name(r.task);
    j["instruction"] = r.instruction;
    j["chosen"] = r.chosen;
    j["rejected"] = r.rejected;
    json meta = meta_to_json(r.meta);
    json votes = json::object();
    for (const auto& [k, v] : r.votes) votes[k] = v;
    meta["votes"] = std::move(votes);
    meta["correct_samples"] = r.correct_samples;
    meta["incorrect_samples"] = r.incorrect_samples;
    meta["schema_version"] = kSchemaVersion;
    j["meta"] = std::move(meta);
    return j.dump();
}

std::string to_json_line(const Prediction& r) {
    json j;
    j["id"] = r.id;
    j["output"] = r.output;
    return j.dump();
}

template <>
Problem from_json_line<Problem>(std::string_view line) {
    const auto j = parse_line(line);
    return guarded([&] {
        Problem p;
        p.id = j.at("id").get<std::string>();
        p.task = parse_task(j.at("task").get<std::string>());
        p.graph = graph_from_json(j.at("graph"));
        p.query = query_from_json(j.at("query"));
        p.answer = answer_from_json(j.at("answer"));
        const auto& t = j.at("tier");
        p.tier.n = t.at("n").get<int>();
        p.tier.p = t.at("p").get<double>();
        p.tier.difficulty = parse_difficulty(t.at("difficulty").get<std::string>());
        p.tier.band = t.value("band", 0);
        p.seed = j.at("seed").get<std::uint64_t>();
        return p;
    });
}

template <>
RawPaths from_json_line<RawPaths>(std::string_view line) {
    const auto j = parse_line(line);
    return guarded([&] {
        RawPaths r;
        r.id = j.at("id").get<std::string>();
        r.task = parse_task(j.at("task").get<std::string>());
        r.profile = j.at("profile").get<std::string>();
        for (const auto& p : j.at("paths")) {
            r.outputs.push_back(p.at("output").get<std::string>());
            r.correct.push_back(p.at("correct").get<bool>());
        }
        return r;
    });
}

template <>
SftRecord from_json_line<SftRecord>(std::string_view line) {
    const auto j = parse_line(line);
    return guarded([&] {
        SftRecord r;
        r.id = j.at("id").get<std::string>();
        r.task = parse_task(j.at("task").get<std::string>());
        r.instruction = j.at("instruction").get<std::string>();
        r.output = j.at("output").get<std::string>();
        const auto& m = j.at("meta");
        r.meta = meta_from_json(m);
        r.path_index = m.at("path_index").get<std::size_t>();
        if (m.contains("strategies")) r.strategies = m["strategies"].get<std::vector<std::string>>();
        return r;
    });
}

template <>
DpoRecord from_json_line<DpoRecord>(std::string_view line) {
    const auto j = parse_line(line);
    return guarded([&] {
        DpoRecord r;
        r.id = j.at("id").get<std::string>();
        r.task = parse_task(j.at("task").get<std::string>());
        r.instruction = j.at("instruction").get<std::string>();
        r.chosen = j.at("chosen").get<std::string>();
        r.rejected = j.at("rejected").get<std::string>();
        const auto& m = j.at("meta");
        r.meta = meta_from_json(m);
        if (m.contains("votes")) {
            for (const auto& [k, v] : m["votes"].items()) r.votes[k] = v.get<std::size_t>();
        }
        r.correct_samples = m.value("correct_samples", std::size_t{0});
        r.incorrect_samples = m.value("incorrect_samples", std::size_t{0});
        return r;
    });
}

template <>
Prediction from_json_line<Prediction>(std::string_view line) {
    const auto j = parse_line(line);
    return guarded([&] { return Prediction{j.at("id").get<std::string>(), j.at("output").get<std::string>()}; });
}

template <typename T>
void write_jsonl(const std::filesystem::path& path, const std::vector<T>& records) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::io, "cannot write " + path.string());
    }
    for (const auto& r : records) {
        out << to_json_line(r) << '\n';
    }
    if (!out) {
        throw Error(ErrorKind::io, "write to " + path.string() + " failed");
    }
}

template <typename T>
std::vector<T> read_jsonl(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw Error(ErrorKind::missing_dependency, path.string() + " does not exist");
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::io, "cannot read " + path.string());
    }
    std::vector<T> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty() || line == "\r") continue;
        try {
            out.push_back(from_json_line<T>(line));
        } catch (const Error& e) {
            throw LineError(number, path.string() + ": " + e.what());
        }
    }
    return out;
}

template void write_jsonl<Problem>(const std::filesystem::path&, const std::vector<Problem>&);
template void write_jsonl<RawPaths>(const std::filesystem::path&, const std::vector<RawPaths>&);
template void write_jsonl<SftRecord>(const std::filesystem::path&, const std::vector<SftRecord>&);
template void write_jsonl<DpoRecord>(const std::filesystem::path&, const std::vector<DpoRecord>&);
template void write_jsonl<Prediction>(const std::filesystem::path&, const std::vector<Prediction>&);
template std::vector<Problem> read_jsonl<Problem>(const std::filesystem::path&);
template std::vector<RawPaths> read_jsonl<RawPaths>(const std::filesystem::path&);
template std::vector<SftRecord> read_jsonl<SftRecord>(const std::filesystem::path&);
template std::vector<DpoRecord> read_jsonl<DpoRecord>(const std::filesystem::path&);
template std::vector<Prediction> read_jsonl<Prediction>(const std::filesystem::path&);

std::vector<SftRecord> assemble_sft(const std::vector<Problem>& problems,
                                    const std::map<std::string, std::vector<std::string>>& paths,
                                    const std::map<std::string, std::vector<std::vector<std::string>>>& strategies,
                                    const GradeOptions& options) {
    const auto by_id = index_problems(problems);
    std::vector<SftRecord> out;
    for (const auto& [id, texts] : paths) {
        auto it = by_id.find(id);
        if (it == by_id.end()) {
            throw Error(ErrorKind::assembly, "paths given for unknown problem '" + id + "'");
        }
        const Problem& p = *it->second;
        const std::string instruction = wrap_instruction(render_problem(p));
        const auto strat = strategies.find(id);
        for (std::size_t i = 0; i < texts.size(); ++i) {
            if (!grade(p, texts[i], options).correct) {
                throw Error(ErrorKind::assembly, "record " + id + "#" + std::to_string(i) + " does not grade correct");
            }
            SftRecord r{id, p.task, instruction, texts[i], meta_of(p), i, {}};
            if (strat != strategies.end() && i < strat->second.size()) r.strategies = strat->second[i];
            out.push_back(std::move(r));
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const SftRecord& a, const SftRecord& b) {
        return std::tuple(task_index(a.task), a.id, a.path_index) < std::tuple(task_index(b.task), b.id, b.path_index);
    });
    return out;
}

std::optional<DpoCandidate> build_dpo_candidate(const Problem& p, const std::vector<std::string>& samples,
                                                EmbeddingProvider* provider, DpoAssembly& into,
                                                const GradeOptions& options) {
    std::vector<std::string> good, bad;
    for (const auto& s : samples) {
        (grade(p, s, options).correct ? good : bad).push_back(s);
    }
    if (good.empty()) {
        ++into.skipped_no_correct;
        into.skipped_ids.push_back(p.id);
        return std::nullopt;
    }
    const std::string& chosen = good[anchor_index(good)];
    // an incorrect text identical to the chosen one cannot exist, but guard anyway
    std::erase(bad, chosen);
    auto pick = select_dispreferred(chosen, bad, provider);
    if (!pick) {
        ++into.skipped_no_incorrect;
        into.skipped_ids.push_back(p.id);
        return std::nullopt;
    }
    return DpoCandidate{p.id, chosen, bad[pick->index], pick->votes, good.size(), bad.size()};
}

std::vector<DpoRecord> assemble_dpo(const std::vector<Problem>& problems, const std::vector<DpoCandidate>& pairs,
                                    const GradeOptions& options) {
    const auto by_id = index_problems(problems);
    std::vector<DpoRecord> out;
    std::set<std::string> seen;
    for (const auto& c : pairs) {
        auto it = by_id.find(c.id);
        if (it == by_id.end()) {
            throw Error(ErrorKind::assembly, "pair given for unknown problem '" + c.id + "'");
        }
        if (!seen.insert(c.id).second) {
            throw Error(ErrorKind::assembly, "more than one pair for problem '" + c.id + "'");
        }
        const Problem& p = *it->second;
        if (c.chosen == c.rejected) {
            throw Error(ErrorKind::assembly, "pair " + c.id + " has identical chosen and rejected texts");
        }
        if (!grade(p, c.chosen, options).correct) {
            throw Error(ErrorKind::assembly, "pair " + c.id + ": chosen text does not grade correct");
        }
        if (grade(p, c.rejected, options).correct) {
            throw Error(ErrorKind::assembly, "pair " + c.id + ": rejected text grades correct");
        }
        out.push_back({c.id, p.task, wrap_instruction(render_problem(p)), c.chosen, c.rejected, meta_of(p), c.votes,
                       c.correct_samples, c.incorrect_samples});
    }
    std::stable_sort(out.begin(), out.end(), record_order);
    return out;
}

DatasetStats compute_stats(const std::vector<Problem>& problems) {
    DatasetStats s;
    for (const auto& p : problems) {
        auto& t = s.per_task[task_index(p.task)];
        ++t.problems;
        t.nodes += static_cast<std::size_t>(p.graph.num_nodes());
    }
    for (const auto& t : s.per_task) {
        s.total.problems += t.problems;
        s.total.nodes += t.nodes;
    }
    return s;
}

namespace {

template <typename R>
DatasetStats stats_of_records(const std::vector<R>& records) {
    DatasetStats s;
    std::set<std::string> seen;
    for (const auto& r : records) {
        auto& t = s.per_task[task_index(r.task)];
        ++t.paths;
        if (seen.insert(r.id).second) {
            ++t.problems;
            t.nodes += static_cast<std::size_t>(r.meta.n);
        }
    }
    for (const auto& t : s.per_task) {
        s.total.problems += t.problems;
        s.total.nodes += t.nodes;
        s.total.paths += t.paths;
    }
    return s;
}

} // namespace

DatasetStats compute_stats(const std::vector<SftRecord>& records) { return stats_of_records(records); }
DatasetStats compute_stats(const std::vector<DpoRecord>& records) { return stats_of_records(records); }

std::string render_stats_table(const DatasetStats& stats) {
    std::vector<std::string> header{""};
    for (Task t : kAllTasks) header.emplace_back(task_name(t));
    header.emplace_back("Sum");
    std::vector<std::vector<std::string>> rows{header};
    auto row = [&](const char* label, auto field) {
        std::vector<std::string> r{label};
        for (const auto& t : stats.per_task) r.push_back(std::to_string(t.*field));
        r.push_back(std::to_string(stats.total.*field));
        rows.push_back(std::move(r));
    };
    row("Total G-Q", &TaskStats::problems);
    row("Total V", &TaskStats::nodes);
    row("Total R", &TaskStats::paths);

    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    std::ostringstream os;
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i == 0) {
                os << std::left << std::setw(static_cast<int>(width[i])) << r[i];
            } else {
                os << "  " << std::right << std::setw(static_cast<int>(width[i])) << r[i];
            }
        }
        os << '\n';
    }
    return os.str();
}

AuditReport audit_corpus(const std::vector<Problem>& problems, const std::vector<SftRecord>& sft,
                         const std::vector<DpoRecord>& dpo, const GradeOptions& options) {
    const auto by_id = index_problems(problems);
    AuditReport report;
    auto lookup = [&](const std::string& id) -> const Problem& {
        auto it = by_id.find(id);
        if (it == by_id.end()) {
            throw Error(ErrorKind::evaluation, "record refers to unknown problem '" + id + "'");
        }
        return *it->second;
    };
    auto check = [&](const Problem& p, const std::string& id, const char* field, std::size_t index,
                     const std::string& text, bool want_correct) {
        const auto v = grade(p, text, options);
        if (v.correct != want_correct) {
            report.grading_failures.push_back(id + "#" + std::to_string(index) + " " + field +
                                              (want_correct ? " grades incorrect" : " grades correct"));
        }
        for (const auto& s : v.step_violations) report.findings.push_back({id, field, index, s});
    };
    for (const auto& r : sft) {
        ++report.records_checked;
        check(lookup(r.id), r.id, "output", r.path_index, r.output, true);
    }
    for (const auto& r : dpo) {
        ++report.records_checked;
        const Problem& p = lookup(r.id);
        check(p, r.id, "chosen", 0, r.chosen, true);
        check(p, r.id, "rejected", 0, r.rejected, false);
    }
    return report;
}

} // namespace graphreason
